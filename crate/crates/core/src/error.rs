use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(usize),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("empty bundle: at least one input vector is required")]
    EmptyBundle,

    #[error("similarity undefined: {0}")]
    UndefinedSimilarity(String),

    #[error("invalid probability {0}: must lie in [0, 1]")]
    InvalidProbability(f64),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("missing item: {0}")]
    MissingItem(String),

    #[error("degenerate class: {0}")]
    DegenerateClass(String),

    #[error("invalid hyperparameter: {0}")]
    InvalidHyperparameter(String),

    #[error("model state: {0}")]
    ModelState(String),

    #[error("invalid k: {0}")]
    InvalidK(String),

    #[error("invalid memory: {0}")]
    InvalidMemory(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("mapping error: {0}")]
    Mapping(String),

    #[error("incomplete technology table: {0}")]
    IncompleteTable(String),

    #[error("invalid workload descriptor: {0}")]
    InvalidDescriptor(String),

    #[error("unsupported technology node: {0}")]
    UnsupportedNode(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("format error: {0}")]
    Format(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
