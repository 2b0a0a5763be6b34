use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("incomplete solution: {0}")]
    IncompleteSolution(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("invalid generator config: {0}")]
    InvalidConfig(String),

    #[error("topology generation failed: {0}")]
    Generation(String),

    #[error("graph is not connected: {0}")]
    Disconnected(String),

    #[error("instance too large to enumerate: {0}")]
    TooLargeToEnumerate(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error("plot rendering failed: {0}")]
    Plot(String),
}
