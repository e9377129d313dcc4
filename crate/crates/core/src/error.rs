use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("input is empty")]
    EmptyInput,

    #[error("missing required column `{0}`")]
    MissingColumn(String),

    #[error("duplicate record for well `{well}` at depth {depth}")]
    DuplicateRecord { well: String, depth: f64 },

    #[error("LAS format error: {0}")]
    LasFormat(String),

    #[error("unsupported LAS feature: {0}")]
    Unsupported(String),

    #[error("LAS file lacks required curve `{0}`")]
    MissingCurve(String),

    #[error("variable `{0}` is constant across the dataset and cannot be normalized")]
    DegenerateVariable(String),

    #[error("value {value} of `{variable}` lies outside the manifest range [{min}, {max}]")]
    OutOfRange {
        variable: String,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("manifest parse error: {0}")]
    Manifest(String),

    #[error("depths of well `{0}` are not strictly increasing")]
    Ordering(String),

    #[error("cannot summarize an empty collection")]
    EmptyStatistics,

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("well `{0}` is not in the dataset")]
    UnknownWell(String),

    #[error("well `{well}` has {gaps} gap(s) and cannot be used as a complete well")]
    IneligibleWell { well: String, gaps: usize },

    #[error("no gapless well exists in the dataset")]
    NoCandidate,

    #[error("no usable feature columns remain after dropping constant columns")]
    DegenerateFeatures,

    #[error("training rows of trial {trial_id} (gap size {gap_size}) overlap its masked rows")]
    Leakage { gap_size: usize, trial_id: usize },

    #[error("model has not been fitted")]
    Unfitted,

    #[error("insufficient data: {model} needs at least {needed} rows, got {got}")]
    InsufficientData {
        model: &'static str,
        needed: usize,
        got: usize,
    },

    #[error("shape mismatch: expected {expected}, got {got}")]
    Shape { expected: usize, got: usize },

    #[error("numeric instability: {0}")]
    NumericInstability(String),

    #[error("RANSAC found no consensus set with at least {0} inliers")]
    NoConsensus(usize),

    #[error("config error: {0}")]
    Config(String),

    #[error("model serialization: {0}")]
    ModelFormat(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

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
