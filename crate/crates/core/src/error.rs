use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("a closed curve needs at least 4 nodes, got {0}")]
    TooFewNodes(usize),

    #[error("radial amplitude must satisfy |a| < 1, got {0}")]
    InvalidAmplitude(f64),

    #[error("fold count must be positive")]
    InvalidFolds,

    #[error("radius must be positive and finite, got {0}")]
    InvalidRadius(f64),

    #[error("node {index} coincides with its predecessor")]
    DuplicateNode { index: usize },

    #[error("node {index} is not a finite point")]
    NonFiniteNode { index: usize },

    #[error("segment ending at node {index} has length {length:e}, below the degeneracy threshold {threshold:e}")]
    DegenerateSegment {
        index: usize,
        length: f64,
        threshold: f64,
    },

    #[error("enclosed area must be positive, got {0}")]
    NonPositiveArea(f64),

    #[error("sequence length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("row {row} of the cyclic system is not strictly diagonally dominant")]
    NotDiagonallyDominant { row: usize },

    #[error("linear solve failed: {0}")]
    SolverFailure(String),

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, err: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            message: err.to_string(),
        }
    }
}
