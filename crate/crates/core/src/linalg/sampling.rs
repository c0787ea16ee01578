//! Seeded random sampling of states and operators.
//!
//! All samplers are pure functions of their seed, so scans can key each trial
//! off (master seed, trial index) and stay schedule-independent.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::density::{DensityOperator, StateVector};
use super::hermitian::{CMatrix, CVector, HermitianOperator};
use crate::error::{Error, Result};

/// Deterministic RNG for a given seed.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives an independent stream seed from a master seed and an index
/// (SplitMix64 finalizer).
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn standard_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im)
}

fn ginibre(dim: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    DMatrix::from_fn(dim, dim, |_, _| standard_complex(rng))
}

/// Draws GG†/Tr(GG†) from a complex Gaussian G, then mixes with the
/// identity: (1 − dim·min_eig)·ρ + min_eig·I, guaranteeing every eigenvalue
/// is at least `min_eig`.
pub fn sample_density(dim: usize, min_eig: f64, seed: u64) -> Result<DensityOperator> {
    if dim == 0 {
        return Err(Error::Parameter("dimension must be positive".into()));
    }
    if min_eig < 0.0 {
        return Err(Error::Parameter("min_eig must be non-negative".into()));
    }
    if min_eig * dim as f64 >= 1.0 {
        return Err(Error::Parameter(format!(
            "min_eig {min_eig} too large for dimension {dim}: min_eig*dim must stay below 1"
        )));
    }
    let mut rng = rng_from_seed(seed);
    let g = ginibre(dim, &mut rng);
    let wishart = &g * g.adjoint();
    let tr = wishart.trace().re;
    let rho = wishart.scale(1.0 / tr);
    let mixed = rho.scale(1.0 - dim as f64 * min_eig)
        + CMatrix::identity(dim, dim).scale(min_eig);
    DensityOperator::new(HermitianOperator::from_hermitized(mixed))
}

/// Haar-direction pure state on the given subsystem layout: a complex
/// Gaussian vector normalized to unit length.
pub fn sample_pure_state(layout: &[usize], seed: u64) -> Result<StateVector> {
    if layout.is_empty() || layout.contains(&0) {
        return Err(Error::Layout("layout dimensions must be positive".into()));
    }
    let dim: usize = layout.iter().product();
    let mut rng = rng_from_seed(seed);
    let mut amps = CVector::from_fn(dim, |_, _| standard_complex(&mut rng));
    let norm: f64 = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    amps /= Complex64::new(norm, 0.0);
    StateVector::new(layout.to_vec(), amps)
}

/// GUE-style random Hermitian operator (G + G†)/2.
pub fn sample_hermitian(dim: usize, seed: u64) -> HermitianOperator {
    let mut rng = rng_from_seed(seed);
    let g = ginibre(dim, &mut rng);
    HermitianOperator::from_hermitized(g)
}

/// Random Hermitian operator rescaled to unit operator norm.
pub fn sample_unit_hermitian(dim: usize, seed: u64) -> HermitianOperator {
    let h = sample_hermitian(dim, seed);
    let norm = h.operator_norm();
    h.scale(1.0 / norm)
}
