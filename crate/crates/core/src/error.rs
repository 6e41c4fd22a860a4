use thiserror::Error;

/// Errors raised by every solver in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown candidate `{0}`")]
    UnknownCandidate(String),
    #[error("candidate index {index} out of range for {m} candidates")]
    CandidateOutOfRange { index: usize, m: usize },
    #[error("invalid election: {0}")]
    InvalidElection(String),
    #[error("k = {k} out of range for {m} candidates")]
    KOutOfRange { k: usize, m: usize },
    #[error("configuration error: {0}")]
    Config(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("generation error: {0}")]
    Generation(String),
    #[error("resource cap exceeded: {0}")]
    CapExceeded(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
