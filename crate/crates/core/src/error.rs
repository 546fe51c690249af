//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by signal construction, transforms and estimators.
#[derive(Debug, Error)]
pub enum HolderError {
    /// A precondition on the inputs does not hold (bad grid, bad scale range, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// An estimate cannot be produced (e.g. every scale in the fit window is zero).
    #[error("estimation error: {0}")]
    Estimation(String),

    /// A numerical routine was asked to run below its accuracy floor.
    #[error("accuracy error: {0}")]
    Accuracy(String),

    /// A generator recursion left the representable range; the message reports
    /// how much of the construction is feasible.
    #[error("truncation error: {0}")]
    Truncation(String),

    /// Malformed input file or parameter string.
    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, HolderError>;
