use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// Parameters outside an operation's documented domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// An enumeration or search would exceed the configured budget.
    #[error("budget exceeded: {0}")]
    Budget(String),
    /// A structural precondition on an input object failed.
    #[error("invalid object: {0}")]
    Invalid(String),
    /// Malformed textual or JSON input.
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn budget(msg: impl Into<String>) -> Error {
    Error::Budget(msg.into())
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::Invalid(msg.into())
}
