//! Analytic mixing and entangling rates for every entropy spec, the maximal
//! rate via the optimal commutator witness, and an independent central
//! finite-difference oracle.
//!
//! For an ensemble evolving as ρ(t) = p·ρ₁ + (1−p)·e^{−iHt} ρ₂ e^{iHt}, the
//! signed rate of a trace-form entropy k₁·Tr F(ρ) + k₂ with F′ = f + const is
//!
//!   Λ(H) = Re{ i·k₁·Tr(H [X, f(Y)]) },   X = p·ρ₁,  Y = ρ(0),
//!
//! and log-trace forms carry the extra 1/Tr F(Y) factor. For a four-part pure
//! state evolving by I ⊗ e^{iH_AB t} ⊗ I, the entangling rate replaces X, Y
//! with ρ_aAB and the lifted f(ρ_aA) ⊗ I_B. The constant in F′ = f + const
//! never contributes: it multiplies the trace of a commutator.

use num_complex::Complex64;

use crate::ensembles::{evolve_pure, lift_interaction, Ensemble2};
use crate::entropy::{entropy_eval, EntropySpec, RateParts, ScalarFunction};
use crate::error::{Error, Result};
use crate::linalg::{
    commutator, commutator_witness, kron, matrix_function, CMatrix, HermitianOperator,
    SpectralDecomposition, StateVector,
};

/// Residual imaginary part allowed before a computed rate is declared real.
const IMAG_RESIDUE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RateKind {
    Mixing,
    Entangling,
    MaxMixing,
}

/// A computed rate with the context it was computed in.
#[derive(Debug, Clone)]
pub struct RateRecord {
    pub kind: RateKind,
    pub value: f64,
    pub spec: String,
    pub context: String,
    pub witness_present: bool,
}

fn spectral_with_floor(
    op: &HermitianOperator,
    parts: &RateParts,
    what: &str,
) -> Result<SpectralDecomposition> {
    let sd = op.spectral();
    if sd.min_eigenvalue() < parts.floor {
        return Err(Error::Domain(format!(
            "{what} has eigenvalue {:.3e} below the kernel floor {:.0e}",
            sd.min_eigenvalue(),
            parts.floor
        )));
    }
    Ok(sd)
}

fn realize(raw: Complex64, label: &str) -> Result<f64> {
    if raw.im.abs() > IMAG_RESIDUE_TOL {
        return Err(Error::Invariant(format!(
            "{label} has imaginary residue {:.3e}",
            raw.im
        )));
    }
    Ok(raw.re)
}

/// Signed mixing rate Λ(H) = dS(ρ(t))/dt at t = 0 for the given entropy.
pub fn mixing_rate(e: &Ensemble2, h: &HermitianOperator, spec: &EntropySpec) -> Result<f64> {
    if h.dim() != e.dim() {
        return Err(Error::Layout(format!(
            "Hamiltonian dimension {} does not match ensemble dimension {}",
            h.dim(),
            e.dim()
        )));
    }
    let parts = spec.rate_parts();
    let sd = spectral_with_floor(e.y().op(), &parts, "expected state")?;
    let f_y = sd.apply(|v| parts.kernel.eval(v));
    let comm = commutator(e.x().matrix(), f_y.matrix());
    let tr = (h.matrix() * comm).trace();
    let mut raw = Complex64::i() * tr * Complex64::new(parts.k1, 0.0);
    if let Some(big_f) = &parts.normalizer {
        let norm: f64 = sd.eigenvalues.iter().map(|&v| big_f.eval(v)).sum();
        if norm.abs() < 1e-14 {
            return Err(Error::Domain("normalizer Tr F(Y) vanished".into()));
        }
        raw /= Complex64::new(norm, 0.0);
    }
    realize(raw, "mixing rate")
}

/// Maximal mixing rate ‖[X, f(Y)]‖₁ together with the Hamiltonian attaining
/// it.
pub fn max_mixing_rate(
    e: &Ensemble2,
    f: &ScalarFunction,
) -> Result<(f64, HermitianOperator)> {
    let f_y = matrix_function(e.y().op(), f)?;
    commutator_witness(e.x(), &f_y)
}

/// Signed entangling rate Γ(Ψ, H) = dE(ρ_aA(t))/dt at t = 0, where the
/// entanglement E is the given entropy of the reduced state on (a, A).
pub fn entangling_rate(
    psi: &StateVector,
    h_ab: &HermitianOperator,
    spec: &EntropySpec,
) -> Result<f64> {
    let layout = psi.layout();
    if layout.len() != 4 {
        return Err(Error::Layout(format!(
            "expected a four-part layout (a, A, B, b), got {} parts",
            layout.len()
        )));
    }
    let (d_a, d_big_a, d_b) = (layout[0], layout[1], layout[2]);
    if h_ab.dim() != d_big_a * d_b {
        return Err(Error::Layout(format!(
            "interaction dimension {} does not match d_A*d_B = {}",
            h_ab.dim(),
            d_big_a * d_b
        )));
    }
    let parts = spec.rate_parts();
    let rho_aab = psi.reduced(&[0, 1, 2])?;
    let rho_aa = psi.reduced(&[0, 1])?;
    let sd = spectral_with_floor(rho_aa.op(), &parts, "reduced state")?;
    let f_aa = sd.apply(|v| parts.kernel.eval(v));
    let lifted_f = kron(f_aa.matrix(), &CMatrix::identity(d_b, d_b));
    let h_lift = lift_interaction(h_ab, d_a);
    let comm = commutator(rho_aab.matrix(), &lifted_f);
    let tr = (h_lift.matrix() * comm).trace();
    let mut raw = Complex64::i() * tr * Complex64::new(parts.k1, 0.0);
    if let Some(big_f) = &parts.normalizer {
        let norm: f64 = sd.eigenvalues.iter().map(|&v| big_f.eval(v)).sum();
        if norm.abs() < 1e-14 {
            return Err(Error::Domain("normalizer Tr F(rho_aA) vanished".into()));
        }
        raw /= Complex64::new(norm, 0.0);
    }
    realize(raw, "entangling rate")
}

/// Central-difference oracle for the mixing rate:
/// (S(ρ(dt)) − S(ρ(−dt))) / (2·dt). Error is O(dt²) for spectra bounded away
/// from the kernel's singularities.
pub fn mixing_rate_fd(
    e: &Ensemble2,
    h: &HermitianOperator,
    spec: &EntropySpec,
    dt: f64,
) -> Result<f64> {
    if dt <= 0.0 {
        return Err(Error::Parameter(format!("dt must be positive, got {dt}")));
    }
    let fwd = entropy_eval(&e.evolve(h, dt)?, spec)?;
    let bwd = entropy_eval(&e.evolve(h, -dt)?, spec)?;
    Ok((fwd - bwd) / (2.0 * dt))
}

/// Central-difference oracle for the entangling rate.
pub fn entangling_rate_fd(
    psi: &StateVector,
    h_ab: &HermitianOperator,
    spec: &EntropySpec,
    dt: f64,
) -> Result<f64> {
    if dt <= 0.0 {
        return Err(Error::Parameter(format!("dt must be positive, got {dt}")));
    }
    let fwd = entropy_eval(&evolve_pure(psi, h_ab, dt)?.reduced(&[0, 1])?, spec)?;
    let bwd = entropy_eval(&evolve_pure(psi, h_ab, -dt)?.reduced(&[0, 1])?, spec)?;
    Ok((fwd - bwd) / (2.0 * dt))
}
