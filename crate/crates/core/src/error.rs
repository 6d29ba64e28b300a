use thiserror::Error;

/// Errors raised by the exact-arithmetic layers and the algorithms built on them.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("invalid field descriptor: {0}")]
    InvalidField(String),
    #[error("modulus is reducible over the base field")]
    Reducible,
    #[error("invalid element: {0}")]
    InvalidElement(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// An internal consistency check failed. Seeing this means a bug or an
    /// input that silently broke a documented precondition.
    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn violation(msg: impl Into<String>) -> Error {
    Error::InvariantViolation(msg.into())
}
