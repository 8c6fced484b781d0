use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors across the pipeline stages.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid dessin: {0}")]
    InvalidDessin(String),

    #[error("passport not realizable: {0}")]
    Unrealizable(String),

    #[error("search limit exceeded: {0}")]
    LimitExceeded(String),

    #[error("numeric stage failure: {0}")]
    Numeric(String),

    #[error("singular linear system: {0}")]
    Singular(String),

    #[error("seed rejected: {0}")]
    SeedRejected(String),

    #[error("newton iteration failed: {0}")]
    NewtonFailed(String),

    #[error("algebraic recognition failed: {0}")]
    Recognition(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("unsupported passport shape: {0}")]
    UnsupportedShape(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
