//! Mixing- and entangling-rate toolkit for quantum ensembles.
//!
//! The crate computes exact entropy rates for two-state ensembles and
//! bipartite pure states under a family of entropy measures (von Neumann,
//! Rényi, Tsallis and two generic trace forms), evaluates the closed-form
//! commutator trace-norm bounds that cap those rates, checks the growth
//! condition the bounds rely on, and runs seeded randomized scans that
//! compare rates against bounds at desk scale.
//!
//! Modules map onto the pipeline:
//!
//! * [`linalg`] — dense Hermitian linear algebra: spectral matrix functions,
//!   trace norms, commutator witnesses, partial traces, seeded sampling.
//! * [`entropy`] — entropy functionals and the scalar function family used
//!   inside commutators.
//! * [`ensembles`] — two-state ensembles, unitary evolution, and the
//!   embedding that turns an entangling-rate problem into a mixing-rate one.
//! * [`rates`] — analytic rates plus an independent finite-difference oracle.
//! * [`bounds`] — every closed-form bound, with validity flags per regime.
//! * [`assumption`] — closed-form thresholds and grid checks for the growth
//!   condition.
//! * [`harness`] — randomized verification and tightness scans with CSV/JSON
//!   reports.

pub mod assumption;
pub mod bounds;
pub mod ensembles;
pub mod entropy;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod rates;

pub use error::{Error, Result};
