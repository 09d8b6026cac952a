use alloc::string::String;

/// Errors raised by the core library.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A problem, solver or configuration value is invalid.
    #[error("configuration error: {0}")]
    Config(String),
    /// Inputs disagree on a dimension.
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    /// The step size backtracking shrank below its floor without accepting a step.
    #[error("backtracking did not terminate at iteration {iteration}: step parameter {gamma:e} fell below 1e-16")]
    Nontermination { iteration: usize, gamma: f64 },
    /// The operation is not supported for this input.
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn domain(msg: &str) -> Error {
    Error::Domain(String::from(msg))
}
