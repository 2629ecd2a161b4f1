use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Validation(String),

    #[error("index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("{what} exceeds the limit of {limit}")]
    CapExceeded { what: String, limit: u64 },

    #[error("size mismatch: expected {expected}, got {actual}")]
    SizeMismatch { expected: usize, actual: usize },

    #[error("invalid edge ({0}, {1})")]
    InvalidEdge(usize, usize),

    #[error("illegal move by {side}: {reason}")]
    IllegalMove { side: &'static str, reason: String },

    #[error("precondition violated: {0}")]
    Precondition(String),
}

impl Error {
    pub fn is_cap(&self) -> bool {
        matches!(self, Error::CapExceeded { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
