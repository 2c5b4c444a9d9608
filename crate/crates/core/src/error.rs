use thiserror::Error;

/// Errors reported by the diagram library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex count {0} is outside the supported range 3..=8")]
    VertexCount(usize),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid permutation: {0}")]
    Permutation(String),

    #[error("invalid encoding: {0}")]
    Encoding(String),

    #[error("brute-force pair enumeration is limited to n <= 4, got n = {0}")]
    BruteForceRange(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
