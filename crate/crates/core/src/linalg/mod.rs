//! Dense Hermitian linear algebra on complex matrices.
//!
//! Everything is dense and eigendecomposition-based; dimensions are capped at
//! desk scale (64) by the callers, so O(n³) decompositions dominate and are
//! cheap.

mod density;
mod hermitian;
mod sampling;

pub use density::{
    embed_middle, kron, partial_trace, partial_trace_matrix, DensityOperator, StateVector,
};
pub use hermitian::{
    commutator, commutator_witness, i_commutator, matrix_function, trace_norm, CMatrix, CVector,
    HermitianOperator, SpectralDecomposition, HERMITICITY_TOL, NEGATIVE_EIGENSPACE_TOL,
};
pub use sampling::{
    derive_seed, rng_from_seed, sample_density, sample_hermitian, sample_pure_state,
    sample_unit_hermitian,
};
