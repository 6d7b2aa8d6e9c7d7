use std::path::PathBuf;

use crate::series::Label;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid series: {0}")]
    InvalidSeries(String),

    #[error("dimension mismatch: expected length {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },

    #[error("index out of range: {0}")]
    Index(String),

    #[error("complexity threshold {threshold} unreachable: stopped at length {length} with complexity {complexity:.4}")]
    ComplexityUnreachable {
        threshold: f64,
        length: usize,
        complexity: f64,
    },

    #[error("silhouette undefined: {0}")]
    EvaluationUndefined(String),

    #[error("no band for class {0}")]
    MissingBand(Label),

    #[error("invalid band: {0}")]
    InvalidBand(String),

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("leave-one-out accuracy needs at least 2 items, got {0}")]
    UndefinedAccuracy(usize),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
