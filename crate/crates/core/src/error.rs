use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A constructor or operation was handed parameters violating its preconditions.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A point or grid falls outside the domain an object was built for.
    /// Tables refuse to extrapolate rather than guess.
    #[error("out of domain: {0}")]
    OutOfDomain(String),

    /// An iterative numerical procedure failed to reach its tolerance.
    #[error("numerics: {0}")]
    Numerics(String),

    /// Two profiles that must share a grid do not.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// Malformed profile/config file.
    #[error("format: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::OutOfDomain(msg.into())
    }
    pub fn numerics(msg: impl Into<String>) -> Self {
        Error::Numerics(msg.into())
    }
}
