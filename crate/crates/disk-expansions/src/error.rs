use thiserror::Error;

/// Errors raised by disk expansions and recursion systems.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiskError {
    /// An expansion degree is not 2 or 3, or does not fit the case.
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    /// The coupling is not one of those declared for the case.
    #[error("coupling {coupling} is not supported for case {case}")]
    UnsupportedCoupling { case: String, coupling: String },
    /// Malformed input.
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
