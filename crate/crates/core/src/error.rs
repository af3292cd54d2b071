use std::path::PathBuf;

use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("negative score at row {row}, column {col}")]
    NegativeScore { row: usize, col: usize },

    #[error("row {row} sums to {sum}, outside tolerance of 1")]
    RowSumOutOfTolerance { row: usize, sum: f64 },

    #[error("non-finite score at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("objective returned a non-finite value at {position:?}")]
    ObjectiveFailure { position: Vec<f64> },

    #[error("grid of {points} points exceeds the limit of {limit}")]
    TooManyGridPoints { points: u128, limit: u128 },

    #[error("label {label} out of range for {classes} classes")]
    LabelOutOfRange { label: usize, classes: usize },

    #[error("image of {width}x{height} is smaller than the {tiles_x}x{tiles_y} tile grid")]
    TileGridTooFine {
        width: usize,
        height: usize,
        tiles_x: usize,
        tiles_y: usize,
    },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("{path}: parse error on line {line}: {message}")]
    Parse { path: PathBuf, line: u64, message: String },

    #[error("unknown sample id `{0}`")]
    UnknownSampleId(String),

    #[error("duplicate sample id `{0}`")]
    DuplicateSampleId(String),

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("image error: {0}")]
    Image(#[from] image::ImageError),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::InvalidConfig(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
