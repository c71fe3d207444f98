use std::path::PathBuf;

use thiserror::Error;

/// Errors arising from datasets on disk or their interaction with a run
/// configuration.
#[derive(Debug, Error)]
pub enum DataError {
    #[error("file not found: {0}")]
    FileNotFound(PathBuf),

    #[error("{path}: unsupported image format: {reason}")]
    UnsupportedFormat { path: PathBuf, reason: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Image {
        path: PathBuf,
        source: palmid_core::Error,
    },

    #[error("person {person} sample {sample} is missing the {spectrum} spectrum")]
    MissingSpectrum {
        person: String,
        sample: usize,
        spectrum: &'static str,
    },

    #[error("ragged dataset: person {person} has {got} samples, expected {expected}")]
    RaggedDataset {
        person: String,
        expected: usize,
        got: usize,
    },

    #[error("dataset layout error at {path}: {reason}")]
    InvalidLayout { path: PathBuf, reason: String },

    #[error("images disagree in size: {width}x{height} after {first_width}x{first_height}")]
    ImageSizeMismatch {
        first_width: usize,
        first_height: usize,
        width: usize,
        height: usize,
    },

    #[error("invalid dimensions: {0}")]
    InvalidDimensions(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid split: {0}")]
    InvalidSplit(String),
}

/// Top-level error for harness runs and the CLI, carrying the process
/// exit code contract: 1 usage, 2 data, 3 numerical failure.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Data(#[from] DataError),

    #[error("numerical failure: {0}")]
    Numerical(palmid_core::Error),
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) => 1,
            Error::Data(_) => 2,
            Error::Numerical(_) => 3,
        }
    }
}

impl From<palmid_core::Error> for Error {
    fn from(e: palmid_core::Error) -> Self {
        Error::Numerical(e)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
pub type DataResult<T> = std::result::Result<T, DataError>;
