use thiserror::Error;

/// Errors raised anywhere in the moment pipeline.
#[derive(Debug, Error)]
pub enum MomentError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("order (n={n}, m={m}) is not legal for {family}")]
    IllegalOrder { family: String, n: i32, m: i32 },

    #[error("{family} kernel is singular at r = {r}")]
    Singularity { family: String, r: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid image: {0}")]
    InvalidImage(String),

    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, MomentError>;
