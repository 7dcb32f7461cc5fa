use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The requested instance has no valid construction (e.g. too few
    /// qubits for a perfect quantum strategy).
    #[error("unsupported-instance: {0}")]
    UnsupportedInstance(String),

    /// A probability fell outside `[0, 1]` under the model's pairing.
    #[error("inconsistent model: {0}")]
    InconsistentModel(String),

    #[error("strategy/config mismatch: {0}")]
    StrategyMismatch(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
