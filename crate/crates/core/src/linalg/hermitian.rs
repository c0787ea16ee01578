//! Hermitian operators, spectral decompositions, matrix functions, trace
//! norms and the optimal commutator witness.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::entropy::ScalarFunction;
use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Max-entry tolerance for certifying A = A†.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Eigenvalues of i[X, G] with |λ| at or below this are treated as
/// non-negative and excluded from the negative eigenspace projector.
pub const NEGATIVE_EIGENSPACE_TOL: f64 = 1e-12;

/// Dense complex square matrix certified Hermitian at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    mat: CMatrix,
}

impl HermitianOperator {
    /// Certifies `mat` Hermitian: max entry deviation from the conjugate
    /// transpose must not exceed [`HERMITICITY_TOL`].
    pub fn new(mat: CMatrix) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::Layout(format!(
                "expected a square matrix, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        if mat.is_empty() {
            return Err(Error::Layout("dimension must be positive".into()));
        }
        let dev = hermiticity_deviation(&mat);
        if dev > HERMITICITY_TOL {
            return Err(Error::Invariant(format!(
                "matrix is not Hermitian: max deviation {dev:.3e} exceeds {HERMITICITY_TOL:.0e}"
            )));
        }
        Ok(Self { mat })
    }

    /// Projects `mat` onto its Hermitian part (A + A†)/2 and wraps it.
    ///
    /// Used for operators that are Hermitian by construction up to roundoff,
    /// e.g. U f(D) U† or i[X, G].
    pub fn from_hermitized(mat: CMatrix) -> Self {
        let herm = (&mat + mat.adjoint()).scale(0.5);
        Self { mat: herm }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            mat: CMatrix::identity(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    /// Real part of the trace (the imaginary part vanishes for Hermitian
    /// operators up to roundoff).
    pub fn trace_re(&self) -> f64 {
        self.mat.trace().re
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            mat: self.mat.scale(factor),
        }
    }

    /// Eigendecomposition with eigenvalues sorted non-increasing.
    pub fn spectral(&self) -> SpectralDecomposition {
        SpectralDecomposition::of(self)
    }

    /// Operator norm, i.e. the largest absolute eigenvalue.
    pub fn operator_norm(&self) -> f64 {
        self.spectral()
            .eigenvalues
            .iter()
            .fold(0.0, |m, &v| m.max(v.abs()))
    }

    /// Applies a scalar function to the spectrum: U f(D) U†.
    pub fn try_apply<F>(&self, f: F) -> Result<HermitianOperator>
    where
        F: Fn(f64) -> Result<f64>,
    {
        self.spectral().try_apply(f)
    }
}

fn hermiticity_deviation(mat: &CMatrix) -> f64 {
    let n = mat.nrows();
    let mut dev: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            dev = dev.max((mat[(i, j)] - mat[(j, i)].conj()).norm());
        }
    }
    dev
}

/// Eigendecomposition of a Hermitian operator, eigenvalues descending and
/// eigenvectors stored as the columns of a unitary matrix.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

impl SpectralDecomposition {
    pub fn of(op: &HermitianOperator) -> Self {
        let se = op.matrix().clone().symmetric_eigen();
        let n = se.eigenvalues.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| se.eigenvalues[b].partial_cmp(&se.eigenvalues[a]).unwrap());
        let eigenvalues: Vec<f64> = order.iter().map(|&k| se.eigenvalues[k]).collect();
        let mut eigenvectors = CMatrix::zeros(n, n);
        for (col, &k) in order.iter().enumerate() {
            eigenvectors.set_column(col, &se.eigenvectors.column(k));
        }
        Self {
            eigenvalues,
            eigenvectors,
        }
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        *self
            .eigenvalues
            .last()
            .expect("decomposition of an empty operator")
    }

    /// Rebuilds U D U†.
    pub fn reconstruct(&self) -> CMatrix {
        self.rebuild_with(|v| v)
    }

    /// Builds U f(D) U† for an infallible scalar map.
    pub fn apply<F: Fn(f64) -> f64>(&self, f: F) -> HermitianOperator {
        HermitianOperator::from_hermitized(self.rebuild_with(f))
    }

    /// Builds U f(D) U†, failing if `f` rejects an eigenvalue.
    pub fn try_apply<F>(&self, f: F) -> Result<HermitianOperator>
    where
        F: Fn(f64) -> Result<f64>,
    {
        let mapped: Result<Vec<f64>> = self.eigenvalues.iter().map(|&v| f(v)).collect();
        let mapped = mapped?;
        let n = self.dim();
        let mut out = CMatrix::zeros(n, n);
        for (k, &fv) in mapped.iter().enumerate() {
            let col = self.eigenvectors.column(k);
            let contrib = col * col.adjoint() * Complex64::new(fv, 0.0);
            out += contrib;
        }
        Ok(HermitianOperator::from_hermitized(out))
    }

    /// Builds the unitary U g(D) U† for a complex-valued spectral map, e.g.
    /// λ ↦ e^{−iλt}.
    pub fn unitary_map<F: Fn(f64) -> Complex64>(&self, f: F) -> CMatrix {
        self.rebuild_complex(f)
    }

    fn rebuild_with<F: Fn(f64) -> f64>(&self, f: F) -> CMatrix {
        self.rebuild_complex(|v| Complex64::new(f(v), 0.0))
    }

    fn rebuild_complex<F: Fn(f64) -> Complex64>(&self, f: F) -> CMatrix {
        let n = self.dim();
        let mut out = CMatrix::zeros(n, n);
        for k in 0..n {
            let col = self.eigenvectors.column(k);
            let contrib = col * col.adjoint() * f(self.eigenvalues[k]);
            out += contrib;
        }
        out
    }
}

/// Applies a scalar function to a Hermitian operator through its spectrum.
///
/// Fails with a domain error when an eigenvalue of `y` lies outside the
/// function's domain; for the logarithm and negative powers this means any
/// eigenvalue below the 1e−12 singularity floor.
pub fn matrix_function(y: &HermitianOperator, f: &ScalarFunction) -> Result<HermitianOperator> {
    let sd = y.spectral();
    let floor = f.spectral_floor();
    let min = sd.min_eigenvalue();
    if min < floor {
        return Err(Error::Domain(format!(
            "eigenvalue {min:.3e} below the domain floor {floor:.0e} of {}",
            f.name()
        )));
    }
    sd.try_apply(|v| f.eval(v))
}

/// [A, B] = AB − BA.
pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

/// The Hermitian operator i[X, G].
pub fn i_commutator(x: &HermitianOperator, g: &HermitianOperator) -> Result<HermitianOperator> {
    if x.dim() != g.dim() {
        return Err(Error::Layout(format!(
            "commutator dimension mismatch: {} vs {}",
            x.dim(),
            g.dim()
        )));
    }
    let c = commutator(x.matrix(), g.matrix());
    Ok(HermitianOperator::from_hermitized(c * Complex64::i()))
}

/// Trace norm: the sum of singular values. For Hermitian input this equals
/// the sum of absolute eigenvalues.
pub fn trace_norm(m: &CMatrix) -> f64 {
    m.clone().svd(false, false).singular_values.iter().sum()
}

/// Trace norm of [X, G] together with the Hamiltonian attaining it.
///
/// The value is the sum of absolute eigenvalues of the Hermitian matrix
/// i[X, G]. The witness is H = I − 2R with R the orthogonal projector on the
/// strictly negative eigenspace of i[X, G] (eigenvalues within
/// [`NEGATIVE_EIGENSPACE_TOL`] of zero count as non-negative), so that
/// Tr(H · i[X, G]) recovers the value and ‖H‖ = 1. A vanishing commutator
/// yields H = I.
pub fn commutator_witness(
    x: &HermitianOperator,
    g: &HermitianOperator,
) -> Result<(f64, HermitianOperator)> {
    let k = i_commutator(x, g)?;
    let sd = k.spectral();
    let value: f64 = sd.eigenvalues.iter().map(|v| v.abs()).sum();
    let n = sd.dim();
    let mut h = CMatrix::identity(n, n);
    for (idx, &ev) in sd.eigenvalues.iter().enumerate() {
        if ev < -NEGATIVE_EIGENSPACE_TOL {
            let col = sd.eigenvectors.column(idx);
            let proj = col * col.adjoint();
            h -= proj * Complex64::new(2.0, 0.0);
        }
    }
    Ok((value, HermitianOperator::from_hermitized(h)))
}
