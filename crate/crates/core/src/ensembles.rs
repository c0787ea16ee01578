//! Two-state ensembles, unitary evolution, and the embedding that writes an
//! entangling-rate problem as a mixing-rate problem.
//!
//! An [`Ensemble2`] is the pair {(p, ρ₁), (1−p, ρ₂)} together with its
//! derived operators X = p·ρ₁ and Y = p·ρ₁ + (1−p)·ρ₂, which satisfy
//! 0 ≤ X ≤ Y ≤ I with Tr X = p and Tr Y = 1.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{
    embed_middle, kron, CMatrix, DensityOperator, HermitianOperator, StateVector,
};

/// Eigenvalue slack for the ordering checks 0 ≤ X ≤ Y ≤ I; eigensolvers
/// produce tiny negative values on genuinely PSD matrices.
const ORDERING_TOL: f64 = 1e-10;
/// Trace slack for Tr X = p and Tr Y = 1.
const TRACE_TOL: f64 = 1e-10;

/// Probabilistic ensemble of two states {(p, ρ₁), (1−p, ρ₂)}.
#[derive(Debug, Clone)]
pub struct Ensemble2 {
    p: f64,
    rho1: DensityOperator,
    rho2: DensityOperator,
    x: HermitianOperator,
    y: DensityOperator,
}

impl Ensemble2 {
    /// Validates the ensemble: matching dimensions, p in (0,1), and the
    /// operator ordering 0 ≤ X ≤ Y ≤ I with the derived traces.
    pub fn new(p: f64, rho1: DensityOperator, rho2: DensityOperator) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) || p == 0.0 || p == 1.0 || !p.is_finite() {
            return Err(Error::Parameter(format!(
                "ensemble weight must lie strictly inside (0,1), got {p}"
            )));
        }
        if rho1.dim() != rho2.dim() {
            return Err(Error::Layout(format!(
                "ensemble states have different dimensions: {} vs {}",
                rho1.dim(),
                rho2.dim()
            )));
        }
        let x = HermitianOperator::from_hermitized(rho1.matrix().scale(p));
        let y_mat = rho1.matrix().scale(p) + rho2.matrix().scale(1.0 - p);
        let y = DensityOperator::new(HermitianOperator::from_hermitized(y_mat.clone()))
            .map_err(|e| Error::Invariant(format!("expected state invalid: {e}")))?;

        let tr_x = x.trace_re();
        if (tr_x - p).abs() > TRACE_TOL {
            return Err(Error::Invariant(format!(
                "Tr X = {tr_x} deviates from p = {p}"
            )));
        }
        let tr_y = y.op().trace_re();
        if (tr_y - 1.0).abs() > TRACE_TOL {
            return Err(Error::Invariant(format!("Tr Y = {tr_y} deviates from 1")));
        }
        let min_x = x.spectral().min_eigenvalue();
        if min_x < -ORDERING_TOL {
            return Err(Error::Invariant(format!(
                "X has negative eigenvalue {min_x:.3e}"
            )));
        }
        let gap = HermitianOperator::from_hermitized(&y_mat - x.matrix());
        let min_gap = gap.spectral().min_eigenvalue();
        if min_gap < -ORDERING_TOL {
            return Err(Error::Invariant(format!(
                "Y - X has negative eigenvalue {min_gap:.3e}"
            )));
        }
        let dim = y.dim();
        let ceiling =
            HermitianOperator::from_hermitized(CMatrix::identity(dim, dim) - &y_mat);
        let min_ceiling = ceiling.spectral().min_eigenvalue();
        if min_ceiling < -ORDERING_TOL {
            return Err(Error::Invariant(format!(
                "I - Y has negative eigenvalue {min_ceiling:.3e}"
            )));
        }
        Ok(Self { p, rho1, rho2, x, y })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn rho1(&self) -> &DensityOperator {
        &self.rho1
    }

    pub fn rho2(&self) -> &DensityOperator {
        &self.rho2
    }

    /// X = p·ρ₁.
    pub fn x(&self) -> &HermitianOperator {
        &self.x
    }

    /// Y = p·ρ₁ + (1−p)·ρ₂, the expected density operator.
    pub fn y(&self) -> &DensityOperator {
        &self.y
    }

    pub fn dim(&self) -> usize {
        self.y.dim()
    }

    /// ρ(t) = p·ρ₁ + (1−p)·e^{−iHt} ρ₂ e^{iHt}. At t = 0 this is Y.
    pub fn evolve(&self, h: &HermitianOperator, t: f64) -> Result<DensityOperator> {
        if h.dim() != self.dim() {
            return Err(Error::Layout(format!(
                "Hamiltonian dimension {} does not match ensemble dimension {}",
                h.dim(),
                self.dim()
            )));
        }
        let u = h
            .spectral()
            .unitary_map(|lambda| Complex64::new(0.0, -lambda * t).exp());
        let moved = &u * self.rho2.matrix() * u.adjoint();
        let mixed = self.rho1.matrix().scale(self.p) + moved.scale(1.0 - self.p);
        DensityOperator::new(HermitianOperator::from_hermitized(mixed))
    }
}

/// Evolves a pure state on the four-part layout (a, A, B, b) by
/// I_a ⊗ e^{iH_AB t} ⊗ I_b.
pub fn evolve_pure(psi: &StateVector, h_ab: &HermitianOperator, t: f64) -> Result<StateVector> {
    let layout = four_part_layout(psi)?;
    let (d_a, d_ab, d_b) = (layout[0], layout[1] * layout[2], layout[3]);
    if h_ab.dim() != d_ab {
        return Err(Error::Layout(format!(
            "interaction dimension {} does not match d_A*d_B = {d_ab}",
            h_ab.dim()
        )));
    }
    let u_ab = h_ab
        .spectral()
        .unitary_map(|lambda| Complex64::new(0.0, lambda * t).exp());
    let full = embed_middle(&u_ab, d_a, d_b);
    let amps = full * psi.amplitudes();
    StateVector::new(psi.layout().to_vec(), amps)
}

/// Lifts an interaction Hamiltonian on A⊗B to the a⊗A⊗B space.
pub fn lift_interaction(h_ab: &HermitianOperator, d_a: usize) -> HermitianOperator {
    let lifted = embed_middle(h_ab.matrix(), d_a, 1);
    HermitianOperator::from_hermitized(lifted)
}

/// Result of embedding a pure state's entangling problem as a two-state
/// mixing problem.
#[derive(Debug, Clone)]
pub struct BravyiEmbedding {
    /// Ensemble with weight p on ρ_aAB and 1−p on μ, so X = p·ρ_aAB and
    /// Y = ρ_aA ⊗ I_B/d_B.
    pub ensemble: Ensemble2,
    /// p = d_B⁻².
    pub p: f64,
    /// The state the pure state reduces to on aAB.
    pub rho_aab: DensityOperator,
    /// The completion state μ = (ρ_aA ⊗ I_B/d_B − p·ρ_aAB)/(1−p).
    pub mu: DensityOperator,
    /// Whether the subsystem order was reversed to ensure d_B ≤ d_A.
    pub swapped: bool,
}

/// Embeds a four-part pure state as the two-state ensemble
/// {(1−p, μ), (p, ρ_aAB)} with p = d_B⁻², whose expected density operator is
/// ρ_aA ⊗ I_B/d_B. When d_B > d_A the subsystem order is reversed first so
/// the construction always traces out the smaller interacting side.
pub fn bravyi_embedding(psi: &StateVector) -> Result<BravyiEmbedding> {
    let layout = four_part_layout(psi)?;
    let (d_a_dim, d_b_dim) = (layout[1], layout[2]);
    let (work, swapped) = if d_b_dim <= d_a_dim {
        (psi.clone(), false)
    } else {
        (psi.reversed(), true)
    };
    let wl = work.layout().to_vec();
    let d_b = wl[2];
    let p = 1.0 / (d_b as f64 * d_b as f64);

    let rho_aab = work.reduced(&[0, 1, 2])?;
    let rho_aa = work.reduced(&[0, 1])?;
    let eye_b = CMatrix::identity(d_b, d_b).scale(1.0 / d_b as f64);
    let y_mat = kron(rho_aa.matrix(), &eye_b);

    let mu_mat = (&y_mat - rho_aab.matrix().scale(p)).scale(1.0 / (1.0 - p));
    let mu_op = HermitianOperator::from_hermitized(mu_mat);
    let mu = match DensityOperator::new(mu_op.clone()) {
        Ok(mu) => mu,
        Err(_) => {
            // Allow eigenvalues down to −1e−10; clamp tiny negatives to 0
            // and renormalize. Anything below that indicates a real bug in
            // the construction, whose positivity is guaranteed.
            let sd = mu_op.spectral();
            if sd.min_eigenvalue() < -1e-10 {
                return Err(Error::Invariant(format!(
                    "completion state has eigenvalue {:.3e} below -1e-10",
                    sd.min_eigenvalue()
                )));
            }
            let clamped = sd.apply(|v| v.max(0.0));
            let tr = clamped.trace_re();
            DensityOperator::new(clamped.scale(1.0 / tr))?
        }
    };

    let ensemble = Ensemble2::new(p, rho_aab.clone(), mu.clone())?;
    Ok(BravyiEmbedding {
        ensemble,
        p,
        rho_aab,
        mu,
        swapped,
    })
}

fn four_part_layout(psi: &StateVector) -> Result<[usize; 4]> {
    let l = psi.layout();
    if l.len() != 4 {
        return Err(Error::Layout(format!(
            "expected a four-part layout (a, A, B, b), got {} parts",
            l.len()
        )));
    }
    Ok([l[0], l[1], l[2], l[3]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::{entropy_eval, EntropySpec};
    use crate::linalg::{
        sample_density, sample_hermitian, sample_pure_state, sample_unit_hermitian,
    };
    use approx::assert_abs_diff_eq;

    fn max_dev(a: &CMatrix, b: &CMatrix) -> f64 {
        (a - b).iter().fold(0.0f64, |m, z| m.max(z.norm()))
    }

    #[test]
    fn uniform_ensemble_derives_trivial_operators() {
        let half = DensityOperator::maximally_mixed(2);
        let e = Ensemble2::new(0.5, half.clone(), half).unwrap();
        assert!(max_dev(e.y().matrix(), DensityOperator::maximally_mixed(2).matrix()) <= 1e-14);
        assert!(max_dev(e.x().matrix(), &CMatrix::identity(2, 2).scale(0.25)) <= 1e-14);
    }

    #[test]
    fn golden_two_dim_ensemble_constructs() {
        // ρ₁ = |+⟩⟨+|, Y = diag(0.9, 0.1), ρ₂ = (Y − 0.1·ρ₁)/0.9.
        let p = 0.1;
        let plus = CMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(0.5, 0.0),
                Complex64::new(0.5, 0.0),
                Complex64::new(0.5, 0.0),
                Complex64::new(0.5, 0.0),
            ],
        );
        let rho1 = DensityOperator::from_matrix(plus.clone()).unwrap();
        let mut y = CMatrix::zeros(2, 2);
        y[(0, 0)] = Complex64::new(0.9, 0.0);
        y[(1, 1)] = Complex64::new(0.1, 0.0);
        let rho2 =
            DensityOperator::from_matrix((&y - plus.scale(p)).scale(1.0 / (1.0 - p))).unwrap();
        let e = Ensemble2::new(p, rho1, rho2).unwrap();
        assert!(max_dev(e.y().matrix(), &y) <= 1e-12);
        assert_abs_diff_eq!(e.x().trace_re(), p, epsilon = 1e-12);
    }

    #[test]
    fn random_ensembles_satisfy_operator_ordering() {
        for seed in 0..20u64 {
            let rho1 = sample_density(4, 1e-3, 10 + 2 * seed).unwrap();
            let rho2 = sample_density(4, 1e-3, 11 + 2 * seed).unwrap();
            let e = Ensemble2::new(0.3, rho1, rho2).unwrap();
            // Construction already certifies 0 ≤ X ≤ Y ≤ I; re-check Y's top
            // eigenvalue directly.
            assert!(e.y().eigenvalues()[0] <= 1.0 + 1e-10);
        }
    }

    #[test]
    fn ensemble_rejects_bad_weight_and_dims() {
        let a = DensityOperator::maximally_mixed(2);
        let b = DensityOperator::maximally_mixed(3);
        assert!(matches!(
            Ensemble2::new(0.0, a.clone(), a.clone()),
            Err(Error::Parameter(_))
        ));
        assert!(matches!(
            Ensemble2::new(0.5, a, b),
            Err(Error::Layout(_))
        ));
    }

    #[test]
    fn evolution_at_time_zero_returns_expected_state() {
        let e = Ensemble2::new(
            0.25,
            sample_density(3, 1e-3, 21).unwrap(),
            sample_density(3, 1e-3, 22).unwrap(),
        )
        .unwrap();
        let h = sample_hermitian(3, 23);
        let rho0 = e.evolve(&h, 0.0).unwrap();
        assert!(max_dev(rho0.matrix(), e.y().matrix()) <= 1e-12);
    }

    #[test]
    fn commuting_hamiltonian_freezes_the_state() {
        // Diagonal ρ₂ and diagonal H commute.
        let mut d1 = CMatrix::zeros(2, 2);
        d1[(0, 0)] = Complex64::new(0.7, 0.0);
        d1[(1, 1)] = Complex64::new(0.3, 0.0);
        let mut d2 = CMatrix::zeros(2, 2);
        d2[(0, 0)] = Complex64::new(0.2, 0.0);
        d2[(1, 1)] = Complex64::new(0.8, 0.0);
        let e = Ensemble2::new(
            0.4,
            DensityOperator::from_matrix(d1).unwrap(),
            DensityOperator::from_matrix(d2).unwrap(),
        )
        .unwrap();
        let mut hm = CMatrix::zeros(2, 2);
        hm[(0, 0)] = Complex64::new(1.0, 0.0);
        hm[(1, 1)] = Complex64::new(-2.0, 0.0);
        let h = HermitianOperator::new(hm).unwrap();
        for t in [0.3, 1.7, 4.0] {
            let rho_t = e.evolve(&h, t).unwrap();
            assert!(max_dev(rho_t.matrix(), e.y().matrix()) <= 1e-12);
        }
    }

    #[test]
    fn evolved_component_spectrum_is_constant() {
        let e = Ensemble2::new(
            0.3,
            sample_density(4, 1e-3, 31).unwrap(),
            sample_density(4, 1e-3, 32).unwrap(),
        )
        .unwrap();
        let h = sample_hermitian(4, 33);
        let spec2: Vec<f64> = e.rho2().eigenvalues().to_vec();
        for t in [0.5, 2.0] {
            // Reconstruct the evolved second component alone.
            let u = h
                .spectral()
                .unitary_map(|l| Complex64::new(0.0, -l * t).exp());
            let moved = DensityOperator::new(HermitianOperator::from_hermitized(
                &u * e.rho2().matrix() * u.adjoint(),
            ))
            .unwrap();
            for (a, b) in moved.eigenvalues().iter().zip(spec2.iter()) {
                assert!((a - b).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn evolve_pure_basics() {
        let psi = sample_pure_state(&[2, 2, 2, 2], 41).unwrap();
        let h = sample_hermitian(4, 42);
        let at_zero = evolve_pure(&psi, &h, 0.0).unwrap();
        let dev = (psi.amplitudes() - at_zero.amplitudes())
            .iter()
            .fold(0.0f64, |m, z| m.max(z.norm()));
        assert!(dev <= 1e-12);
        let later = evolve_pure(&psi, &h, 1.3).unwrap();
        let norm: f64 = later.amplitudes().iter().map(|z| z.norm_sqr()).sum();
        assert_abs_diff_eq!(norm, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn identity_interaction_leaves_reduced_states_unchanged() {
        let psi = sample_pure_state(&[2, 2, 2, 2], 51).unwrap();
        let h = HermitianOperator::identity(4);
        let moved = evolve_pure(&psi, &h, 0.9).unwrap();
        for keep in [vec![0usize, 1], vec![2, 3]] {
            let a = psi.reduced(&keep).unwrap();
            let b = moved.reduced(&keep).unwrap();
            assert!(max_dev(a.matrix(), b.matrix()) <= 1e-12);
        }
    }

    #[test]
    fn eigenstate_reduced_state_is_stationary() {
        // Computational basis state and diagonal interaction: an eigenstate
        // of I ⊗ H_AB ⊗ I.
        let mut amps = crate::linalg::CVector::zeros(16);
        amps[5] = Complex64::new(1.0, 0.0);
        let psi = StateVector::new(vec![2, 2, 2, 2], amps).unwrap();
        let mut hm = CMatrix::zeros(4, 4);
        for i in 0..4 {
            hm[(i, i)] = Complex64::new(i as f64, 0.0);
        }
        let h = HermitianOperator::new(hm).unwrap();
        let moved = evolve_pure(&psi, &h, 2.1).unwrap();
        let a = psi.reduced(&[0, 1]).unwrap();
        let b = moved.reduced(&[0, 1]).unwrap();
        assert!(max_dev(a.matrix(), b.matrix()) <= 1e-12);
    }

    #[test]
    fn embedding_reconstructs_the_lifted_state() {
        for seed in 0..10u64 {
            let psi = sample_pure_state(&[2, 2, 2, 2], 600 + seed).unwrap();
            let emb = bravyi_embedding(&psi).unwrap();
            let d_b = 2;
            let y_ref = kron(
                psi.reduced(&[0, 1]).unwrap().matrix(),
                &CMatrix::identity(d_b, d_b).scale(1.0 / d_b as f64),
            );
            let rebuilt = emb.mu.matrix().scale(1.0 - emb.p)
                + emb.rho_aab.matrix().scale(emb.p);
            assert!(max_dev(&rebuilt, &y_ref) <= 1e-12);
            assert!(max_dev(emb.ensemble.y().matrix(), &y_ref) <= 1e-12);
            assert!(emb.mu.min_eigenvalue() >= -1e-10);
            assert_abs_diff_eq!(emb.p, 0.25, epsilon = 1e-15);
        }
    }

    #[test]
    fn embedding_of_maximally_mixed_reduction_is_trivial() {
        // Maximally entangle aAB (dim 4) with the ancilla b (dim 4): then
        // ρ_aAB = I/4 equals its own lift ρ_aA ⊗ I_B/2, so μ = ρ_aAB = I/4.
        let mut amps = crate::linalg::CVector::zeros(16);
        let c = Complex64::new(0.5, 0.0);
        for k in 0..4usize {
            amps[k * 4 + k] = c;
        }
        let psi = StateVector::new(vec![1, 2, 2, 4], amps).unwrap();
        let emb = bravyi_embedding(&psi).unwrap();
        let flat = DensityOperator::maximally_mixed(4);
        assert!(max_dev(emb.rho_aab.matrix(), flat.matrix()) <= 1e-12);
        assert!(max_dev(emb.mu.matrix(), flat.matrix()) <= 1e-12);
        assert!(max_dev(emb.ensemble.y().matrix(), flat.matrix()) <= 1e-12);
    }

    #[test]
    fn embedding_swaps_when_interacting_side_is_larger() {
        let psi = sample_pure_state(&[1, 2, 3, 2], 71).unwrap();
        let emb = bravyi_embedding(&psi).unwrap();
        assert!(emb.swapped);
        assert_abs_diff_eq!(emb.p, 0.25, epsilon = 1e-15);
    }

    #[test]
    fn total_mixing_window_holds_on_a_time_grid() {
        use crate::entropy::binary_entropy;
        for seed in 0..10u64 {
            let p = 0.3;
            let e = Ensemble2::new(
                p,
                sample_density(3, 1e-3, 800 + 2 * seed).unwrap(),
                sample_density(3, 1e-3, 801 + 2 * seed).unwrap(),
            )
            .unwrap();
            let h = sample_unit_hermitian(3, 900 + seed);
            let s_avg = p * entropy_eval(e.rho1(), &EntropySpec::VonNeumann).unwrap()
                + (1.0 - p) * entropy_eval(e.rho2(), &EntropySpec::VonNeumann).unwrap();
            let window = binary_entropy(p).unwrap();
            for k in 0..50 {
                let t = 2.0 * std::f64::consts::PI * k as f64 / 49.0;
                let s = entropy_eval(&e.evolve(&h, t).unwrap(), &EntropySpec::VonNeumann)
                    .unwrap();
                assert!(s >= s_avg - 1e-8, "entropy dipped below the average");
                assert!(s <= s_avg + window + 1e-8, "entropy exceeded the window");
            }
        }
    }

    #[test]
    fn total_entangling_window_holds_on_a_time_grid() {
        for seed in 0..10u64 {
            let psi = sample_pure_state(&[2, 2, 2, 2], 1000 + seed).unwrap();
            let h = sample_unit_hermitian(4, 1100 + seed);
            let e0 = entropy_eval(
                &psi.reduced(&[0, 1]).unwrap(),
                &EntropySpec::VonNeumann,
            )
            .unwrap();
            let cap = 2.0 * 2.0f64.ln();
            for k in 0..50 {
                let t = 2.0 * std::f64::consts::PI * k as f64 / 49.0;
                let et = entropy_eval(
                    &evolve_pure(&psi, &h, t).unwrap().reduced(&[0, 1]).unwrap(),
                    &EntropySpec::VonNeumann,
                )
                .unwrap();
                assert!((et - e0).abs() <= cap + 1e-8);
            }
        }
    }

    #[test]
    fn pure_state_entropy_is_symmetric_across_the_cut() {
        let specs = vec![
            EntropySpec::VonNeumann,
            EntropySpec::renyi(0.5).unwrap(),
            EntropySpec::renyi(2.0).unwrap(),
            EntropySpec::tsallis(0.5).unwrap(),
            EntropySpec::tsallis(2.0).unwrap(),
        ];
        for seed in 0..10u64 {
            let psi = sample_pure_state(&[2, 3, 2, 2], 1200 + seed).unwrap();
            let alice = psi.reduced(&[0, 1]).unwrap();
            let bob = psi.reduced(&[2, 3]).unwrap();
            for spec in &specs {
                let a = entropy_eval(&alice, spec).unwrap();
                let b = entropy_eval(&bob, spec).unwrap();
                assert!(
                    (a - b).abs() <= 1e-10,
                    "cut symmetry failed for {}",
                    spec.name()
                );
            }
        }
    }
}
