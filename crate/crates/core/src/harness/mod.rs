//! Randomized bound-verification and tightness scans.
//!
//! Every scan is a pure function of its [`ScanConfig`]: each trial draws its
//! inputs from an RNG stream keyed by (master seed, trial index), so reports
//! are byte-identical across runs and independent of execution order.

mod config;
mod report;
mod scans;

pub use config::ScanConfig;
pub use report::{NamedMatrix, ScanReport, ScanRow, ScanSummary, WitnessRecord};
pub use scans::{tightness_scan, verify_sie_bounds, verify_sim_bounds};

/// Slack on mixing-side bound comparisons.
pub const SIM_TOL: f64 = 1e-10;
/// Slack on entangling-side bound comparisons.
pub const SIE_TOL: f64 = 1e-8;
