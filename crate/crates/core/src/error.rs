use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// A state with (numerically) zero norm where a normalizable one is required.
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    /// Count data that carries no information, e.g. all corrected counts zero.
    #[error("degenerate data: {0}")]
    DegenerateData(String),
    #[error("optimizer failed: {0}")]
    OptimizerFailure(String),
    #[error("{failed} of {total} Monte Carlo trials failed to converge")]
    TooManyFailures { failed: usize, total: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<V, E = Error> = std::result::Result<V, E>;

pub(crate) fn invalid<V>(msg: impl Into<String>) -> Result<V> {
    Err(Error::InvalidArgument(msg.into()))
}
