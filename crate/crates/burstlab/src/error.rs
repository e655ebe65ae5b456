//! Crate-wide error type.

/// Errors produced by simulation engines, estimators and trajectory I/O.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A configuration or model parameter violates its constraint.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// An input lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Not enough data to run an estimator.
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    /// A computation produced a non-finite or otherwise unusable value.
    #[error("numeric failure: {0}")]
    Numeric(String),
    /// A trajectory or config file could not be parsed.
    #[error("malformed file: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
