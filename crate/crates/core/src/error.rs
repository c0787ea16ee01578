//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A scalar argument or an operator eigenvalue lies outside the domain of
    /// the function being applied.
    #[error("domain error: {0}")]
    Domain(String),

    /// Subsystem dimensions are inconsistent with the operator or state they
    /// describe.
    #[error("layout error: {0}")]
    Layout(String),

    /// A configuration or call parameter is outside its admissible range.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// A constructed value failed one of its type invariants.
    #[error("invariant violation: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
