//! Crate-wide error type.
//!
//! Every variant carries a stable machine-readable kind string so the CLI can
//! print single-line diagnostics and map failures to exit codes: usage and
//! configuration problems exit with 2, data problems with 3.

use std::path::PathBuf;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A CSV header does not provide every column the schema declares.
    #[error("{0}")]
    SchemaMismatch(String),

    /// A CSV data row cannot be read at all (e.g. wrong field count).
    #[error("line {line}: {detail}")]
    MalformedRow { line: u64, detail: String },

    /// A band specification has gaps, overlaps, or does not tile a feature range.
    #[error("feature {feature}: {detail}")]
    InvalidBands { feature: String, detail: String },

    /// A caller-supplied argument is out of range or inconsistent.
    #[error("{0}")]
    InvalidArgument(String),

    /// The toolkit configuration file is missing, unreadable, or inconsistent.
    #[error("{0}")]
    InvalidConfig(String),

    /// Not enough data to perform the operation (e.g. empty training set).
    #[error("{0}")]
    InsufficientData(String),

    /// A categorical value outside the feature's declared closed domain.
    #[error("{value:?} is not in the domain of feature {feature}")]
    UnknownCategory { feature: String, value: String },

    /// A confusion matrix with no observations.
    #[error("no observations")]
    EmptyMatrix,

    /// A serialized model that cannot be decoded or fails validation.
    #[error("{0}")]
    ModelFormat(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Stable kind slug used in CLI diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::SchemaMismatch(_) => "schema-mismatch",
            Error::MalformedRow { .. } => "malformed-row",
            Error::InvalidBands { .. } => "invalid-bands",
            Error::InvalidArgument(_) => "invalid-argument",
            Error::InvalidConfig(_) => "invalid-config",
            Error::InsufficientData(_) => "insufficient-data",
            Error::UnknownCategory { .. } => "unknown-category",
            Error::EmptyMatrix => "empty-matrix",
            Error::ModelFormat(_) => "model-format",
            Error::Io { .. } => "io",
        }
    }

    /// CLI exit code: 2 for usage/config errors, 3 for data errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidArgument(_) | Error::InvalidConfig(_) | Error::InvalidBands { .. } => 2,
            _ => 3,
        }
    }
}
