use thiserror::Error;

/// Errors raised by constructions and diagnostics.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A precondition on the inputs does not hold.
    #[error("domain error: {0}")]
    Domain(String),
    /// The computation would exceed its configured budget.
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    /// Integer arithmetic left the representable range.
    #[error("integer overflow: {0}")]
    Overflow(String),
    /// Malformed point-set file or parameter string.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }

    pub(crate) fn overflow(msg: impl Into<String>) -> Self {
        Error::Overflow(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
