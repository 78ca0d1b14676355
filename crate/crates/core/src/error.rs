use thiserror::Error;

/// Errors raised by the arithmetic and factor engines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument outside the mathematical domain of the operation
    /// (inverting zero, Legendre symbol of a multiple of p, ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// The fixed working precision cannot resolve the requested quantity.
    #[error("precision error: {0}")]
    Precision(String),
    /// Input belongs to a family the engine does not model.
    #[error("unsupported input: {0}")]
    Unsupported(String),
    /// A documented precondition (general position, equal central characters, ...) fails.
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// Numerical evaluation at or too close to a pole.
    #[error("evaluation error: {0}")]
    Evaluation(String),
    /// Two independent computation routes disagreed.
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
    /// Malformed descriptor or JSON payload.
    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
