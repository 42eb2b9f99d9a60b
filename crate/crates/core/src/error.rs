use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Parse(String),

    #[error("matrix is not square: row {row} has {len} entries, expected {expected}")]
    NonSquare {
        row: usize,
        len: usize,
        expected: usize,
    },

    #[error("entry ({row}, {col}) is not an integer: {text}")]
    NonInteger {
        row: usize,
        col: usize,
        text: String,
    },

    #[error("diagonal entry ({0}, {0}) must be zero")]
    NonZeroDiagonal(usize),

    #[error("invalid topology: {0}")]
    InvalidTopology(String),

    #[error("invalid arrangement: {0}")]
    InvalidArrangement(String),

    #[error("invalid class structure: {0}")]
    InvalidClasses(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{what}: {actual} exceeds the limit of {limit}")]
    LimitExceeded {
        what: &'static str,
        limit: u128,
        actual: u128,
    },

    #[error("operation requires a binary (0/1) profile")]
    NonBinary,

    #[error("operation requires a path topology")]
    RequiresPath,

    #[error("pattern mismatch: {0}")]
    PatternMismatch(String),

    #[error("internal check failed: {0}")]
    Internal(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
