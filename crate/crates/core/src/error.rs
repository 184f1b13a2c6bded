use thiserror::Error;

/// Errors raised by the interference toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Operand dimensions do not fit together.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// An argument violates a documented precondition.
    #[error("invalid input: {0}")]
    Validation(String),

    /// The requested size exceeds a memory or capacity guard.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// A computed quantity fell outside the range the mathematics allows.
    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    /// Malformed text input (matrix files).
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn shape(msg: impl Into<String>) -> Error {
    Error::Shape(msg.into())
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::Validation(msg.into())
}

pub(crate) fn capacity(msg: impl Into<String>) -> Error {
    Error::Capacity(msg.into())
}
