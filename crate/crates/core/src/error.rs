use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("I/O error: {0}")]
    Stream(#[from] std::io::Error),

    #[error("malformed delimited input: {0}")]
    Csv(#[from] csv::Error),

    #[error("header has no column for mandatory field `{0}`")]
    MissingColumn(&'static str),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("configuration file {0} does not exist")]
    ConfigNotFound(PathBuf),

    #[error("cannot parse configuration {path}: {source}")]
    ConfigParse {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("timestamps must be strictly increasing (got {next} after {previous})")]
    NonMonotonicTime { previous: i64, next: i64 },

    #[error("timestamp {at} outside interpolation interval [{start}, {end}]")]
    OutsideInterval { at: i64, start: i64, end: i64 },

    #[error("degenerate interpolation interval at t={0}")]
    DegenerateInterval(i64),

    #[error("empty {0}")]
    Empty(&'static str),

    #[error("cannot split {tracks} tracks into {folds} folds")]
    TooManyFolds { folds: usize, tracks: usize },

    #[error("individual at index {0} has not been evaluated")]
    Unevaluated(usize),

    #[error("no tracks of vessel type `{requested}` (available: {available})")]
    UnknownVesselType { requested: String, available: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Whether the error stems from user-supplied configuration or arguments
    /// rather than from processing.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::InvalidConfig(_)
                | Error::ConfigNotFound(_)
                | Error::ConfigParse { .. }
                | Error::InvalidArgument(_)
                | Error::UnknownVesselType { .. }
                | Error::TooManyFolds { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
