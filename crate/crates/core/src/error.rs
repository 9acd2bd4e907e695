use thiserror::Error;

use crate::vfield::ParseError;

/// Errors raised by the analyses.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Malformed problem data (dimensions, non-finite entries, bad parameters).
    #[error("invalid input: {0}")]
    Input(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    /// Expression evaluated outside its domain (log of nonpositive, division by zero, ...).
    #[error("domain error in component {component}: {message}")]
    Domain { component: usize, message: String },
    /// A numerical procedure did not reach its accuracy target.
    #[error("numerical failure: {0}")]
    Numerical(String),
    /// A precondition of the requested operation is not met.
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// A refinement-based decision changed between grids.
    #[error("inconclusive: {0}")]
    Inconclusive(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
