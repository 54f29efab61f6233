use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("config error in {file}:{line}: {message}")]
    Config {
        file: String,
        line: usize,
        message: String,
    },

    #[error("config checksum mismatch for {file}: expected {expected}, found {actual}")]
    ConfigChecksum {
        file: String,
        expected: String,
        actual: String,
    },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("unparseable host in URL {0:?}")]
    InvalidUrl(String),

    #[error("{path}: line {line}: {message}")]
    MalformedSnapshot {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("manifest mismatch: manifest declares {declared} records, file holds {actual}")]
    ManifestMismatch { declared: usize, actual: usize },

    #[error("checksum mismatch for {path}: expected {expected}, found {actual}")]
    ChecksumMismatch {
        path: PathBuf,
        expected: String,
        actual: String,
    },

    #[error("snapshot is empty")]
    EmptySnapshot,

    #[error("too few tail points for a power-law fit: need at least {min}, got {got}")]
    TooFewTailPoints { min: usize, got: usize },

    #[error("degenerate tail: all sizes at or above xmin are equal")]
    DegenerateTail,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("result log is empty")]
    EmptyLog,

    #[error("ingest error: {0}")]
    Ingest(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn config(file: impl Into<String>, line: usize, message: impl Into<String>) -> Self {
        Error::Config {
            file: file.into(),
            line,
            message: message.into(),
        }
    }

    /// True for errors caused by configuration rather than input data.
    pub fn is_config_error(&self) -> bool {
        matches!(self, Error::Config { .. } | Error::ConfigChecksum { .. })
    }
}
