use thiserror::Error;

/// Errors raised by the algebraic constructions and the explorer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// An operation was applied outside its domain (zero in a dlog, a
    /// non-unit inverted, ...).
    #[error("domain error: {0}")]
    Domain(String),
    #[error("size limit exceeded: {0}")]
    Size(String),
    /// A Laurent denominator left the multiplicative system of polynomials
    /// with unit leading and trailing coefficients.
    #[error("contract violation: {0}")]
    ContractViolation(String),
    /// An internal consistency check failed after construction.
    #[error("construction failure: {0}")]
    ConstructionFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
