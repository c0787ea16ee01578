//! Density operators, multipartite state vectors, tensor-product helpers and
//! the partial trace.

use num_complex::Complex64;

use super::hermitian::{CMatrix, CVector, HermitianOperator};
use crate::error::{Error, Result};

/// Eigenvalue tolerance for certifying positive semidefiniteness.
const PSD_TOL: f64 = 1e-12;
/// Trace tolerance for certifying unit trace.
const TRACE_TOL: f64 = 1e-12;
/// Norm tolerance for certifying unit state vectors.
const NORM_TOL: f64 = 1e-12;

/// Hermitian, positive semidefinite, unit-trace operator.
#[derive(Debug, Clone)]
pub struct DensityOperator {
    op: HermitianOperator,
    eigenvalues: Vec<f64>,
}

impl DensityOperator {
    /// Certifies positivity (eigenvalues ≥ −1e−12) and unit trace (within
    /// 1e−12).
    pub fn new(op: HermitianOperator) -> Result<Self> {
        let sd = op.spectral();
        let min = sd.min_eigenvalue();
        if min < -PSD_TOL {
            return Err(Error::Invariant(format!(
                "not positive semidefinite: min eigenvalue {min:.3e}"
            )));
        }
        let tr = op.trace_re();
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::Invariant(format!(
                "trace {tr} deviates from 1 by more than {TRACE_TOL:.0e}"
            )));
        }
        Ok(Self {
            op,
            eigenvalues: sd.eigenvalues,
        })
    }

    pub fn from_matrix(mat: CMatrix) -> Result<Self> {
        Self::new(HermitianOperator::new(mat)?)
    }

    /// Maximally mixed state I/d.
    pub fn maximally_mixed(dim: usize) -> Self {
        let op = HermitianOperator::identity(dim).scale(1.0 / dim as f64);
        Self::new(op).expect("I/d is a valid density operator")
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn op(&self) -> &HermitianOperator {
        &self.op
    }

    pub fn matrix(&self) -> &CMatrix {
        self.op.matrix()
    }

    /// Eigenvalues in non-increasing order, cached at construction.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn min_eigenvalue(&self) -> f64 {
        *self.eigenvalues.last().expect("nonempty spectrum")
    }

    /// Tr(ρ²).
    pub fn purity(&self) -> f64 {
        self.eigenvalues.iter().map(|v| v * v).sum()
    }
}

/// Normalized pure state over an ordered list of subsystem dimensions.
#[derive(Debug, Clone)]
pub struct StateVector {
    layout: Vec<usize>,
    amplitudes: CVector,
}

impl StateVector {
    /// Certifies unit norm (within 1e−12) and that the layout dimensions
    /// multiply to the vector length.
    pub fn new(layout: Vec<usize>, amplitudes: CVector) -> Result<Self> {
        if layout.is_empty() || layout.contains(&0) {
            return Err(Error::Layout("layout dimensions must be positive".into()));
        }
        let prod: usize = layout.iter().product();
        if prod != amplitudes.len() {
            return Err(Error::Layout(format!(
                "layout product {prod} does not match vector length {}",
                amplitudes.len()
            )));
        }
        let norm_sq: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::Invariant(format!(
                "squared norm {norm_sq} deviates from 1 by more than {NORM_TOL:.0e}"
            )));
        }
        Ok(Self { layout, amplitudes })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn layout(&self) -> &[usize] {
        &self.layout
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    /// |ψ⟩⟨ψ| as a density operator.
    pub fn density(&self) -> DensityOperator {
        let outer = &self.amplitudes * self.amplitudes.adjoint();
        DensityOperator::new(HermitianOperator::from_hermitized(outer))
            .expect("outer product of a unit vector is a valid density operator")
    }

    /// Reduced density operator on the kept subsystems.
    pub fn reduced(&self, keep: &[usize]) -> Result<DensityOperator> {
        partial_trace(&self.density(), &self.layout, keep)
    }

    /// The same state with the subsystem order reversed. Useful for swapping
    /// the roles of the two sides of a bipartite cut.
    pub fn reversed(&self) -> StateVector {
        let rev_layout: Vec<usize> = self.layout.iter().rev().copied().collect();
        let n = self.dim();
        let mut amps = CVector::zeros(n);
        for idx in 0..n {
            let multi = unravel(idx, &self.layout);
            let rev_multi: Vec<usize> = multi.iter().rev().copied().collect();
            let new_idx = ravel(&rev_multi, &rev_layout);
            amps[new_idx] = self.amplitudes[idx];
        }
        StateVector {
            layout: rev_layout,
            amplitudes: amps,
        }
    }
}

/// Kronecker product.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// I_left ⊗ m ⊗ I_right.
pub fn embed_middle(m: &CMatrix, left: usize, right: usize) -> CMatrix {
    let il = CMatrix::identity(left, left);
    let ir = CMatrix::identity(right, right);
    kron(&kron(&il, m), &ir)
}

fn unravel(mut idx: usize, dims: &[usize]) -> Vec<usize> {
    let mut multi = vec![0usize; dims.len()];
    for k in (0..dims.len()).rev() {
        multi[k] = idx % dims[k];
        idx /= dims[k];
    }
    multi
}

fn ravel(multi: &[usize], dims: &[usize]) -> usize {
    let mut idx = 0usize;
    for (m, d) in multi.iter().zip(dims.iter()) {
        idx = idx * d + m;
    }
    idx
}

/// Partial trace over the complement of `keep`, preserving the original
/// order of the kept subsystems.
pub fn partial_trace(
    rho: &DensityOperator,
    layout: &[usize],
    keep: &[usize],
) -> Result<DensityOperator> {
    let reduced = partial_trace_matrix(rho.matrix(), layout, keep)?;
    DensityOperator::new(HermitianOperator::from_hermitized(reduced))
}

/// Partial trace of an arbitrary square matrix over the complement of
/// `keep`.
pub fn partial_trace_matrix(
    mat: &CMatrix,
    layout: &[usize],
    keep: &[usize],
) -> Result<CMatrix> {
    let full: usize = layout.iter().product();
    if mat.nrows() != full || mat.ncols() != full {
        return Err(Error::Layout(format!(
            "layout product {full} does not match matrix dimension {}",
            mat.nrows()
        )));
    }
    if keep.is_empty() {
        return Err(Error::Layout("must keep at least one subsystem".into()));
    }
    let mut seen = vec![false; layout.len()];
    for &k in keep {
        if k >= layout.len() {
            return Err(Error::Layout(format!(
                "keep index {k} out of range for {} subsystems",
                layout.len()
            )));
        }
        if seen[k] {
            return Err(Error::Layout(format!("duplicate keep index {k}")));
        }
        seen[k] = true;
    }
    let mut keep_sorted = keep.to_vec();
    keep_sorted.sort_unstable();

    let traced: Vec<usize> = (0..layout.len()).filter(|i| !seen[*i]).collect();
    let keep_dims: Vec<usize> = keep_sorted.iter().map(|&i| layout[i]).collect();
    let traced_dims: Vec<usize> = traced.iter().map(|&i| layout[i]).collect();
    let dim_keep: usize = keep_dims.iter().product();
    let dim_traced: usize = traced_dims.iter().product::<usize>().max(1);

    // Stride of each subsystem inside the full index.
    let mut strides = vec![1usize; layout.len()];
    for i in (0..layout.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * layout[i + 1];
    }

    let keep_offsets: Vec<usize> = (0..dim_keep)
        .map(|k| {
            let multi = unravel(k, &keep_dims);
            multi
                .iter()
                .zip(keep_sorted.iter())
                .map(|(m, &pos)| m * strides[pos])
                .sum()
        })
        .collect();
    let traced_offsets: Vec<usize> = (0..dim_traced)
        .map(|c| {
            let multi = unravel(c, &traced_dims);
            multi
                .iter()
                .zip(traced.iter())
                .map(|(m, &pos)| m * strides[pos])
                .sum()
        })
        .collect();

    let mut out = CMatrix::zeros(dim_keep, dim_keep);
    for (a, &ra) in keep_offsets.iter().enumerate() {
        for (b, &rb) in keep_offsets.iter().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for &rc in &traced_offsets {
                acc += mat[(ra + rc, rb + rc)];
            }
            out[(a, b)] = acc;
        }
    }
    Ok(out)
}
