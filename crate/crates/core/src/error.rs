use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid polarization: {0}")]
    InvalidPolarization(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("resource bound exceeded: {what} (limit {limit}); {hint}")]
    ResourceBound {
        what: String,
        limit: u64,
        hint: String,
    },

    #[error("unsupported number: {0}")]
    Unsupported(String),

    #[error("containment check failed: {0}")]
    NotContained(String),

    #[error("reducible polynomial: {0}")]
    Reducible(String),

    #[error("no candidate found: {0}")]
    NoCandidate(String),

    #[error("precision unattainable: {0}")]
    Precision(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// Reported by the command line with exit code 2.
    #[error("usage: {0}")]
    Usage(String),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
