use thiserror::Error;

/// Errors produced by cluster generation, geometry and the experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    /// A configuration field violates its contract.
    #[error("invalid config: {0}")]
    InvalidConfig(String),

    /// An argument to an operation violates its contract.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A vertex or point index outside `0..len`.
    #[error("index {index} out of bounds for {len} elements")]
    IndexOutOfBounds { index: usize, len: usize },

    /// A coordinate that is NaN or infinite where finite values are required.
    #[error("non-finite coordinate at point {index}")]
    NonFinite { index: usize },

    /// A malformed input file; `line` is 1-based.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
