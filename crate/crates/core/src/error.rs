use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid weights at index {index}: {reason}")]
    InvalidWeights { index: usize, reason: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("infeasible solution: {0}")]
    Infeasible(String),

    /// The instance is too large for an exact (enumeration or DP) routine.
    #[error("{what}: size {size} exceeds cap {cap}{hint}")]
    Capacity {
        what: &'static str,
        size: usize,
        cap: usize,
        hint: &'static str,
    },

    #[error("dual weights outside the feasible polytope: {0}")]
    OutsidePolytope(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn is_capacity(&self) -> bool {
        matches!(self, Error::Capacity { .. })
    }
}
