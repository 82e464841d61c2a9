//! Error types shared across the crate.

use thiserror::Error;

/// Crate-wide error type.
///
/// The variants map onto the CLI exit codes: configuration problems (2),
/// data/corpus problems (3) and numeric failures (4).
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid configuration value or incompatible configuration combination.
    #[error("configuration error: {0}")]
    Config(String),

    /// Problems with datasets, corpora or their on-disk representations.
    #[error("data error: {0}")]
    Data(String),

    /// A contract between modules was violated (programming or wiring error).
    #[error("contract violation: {0}")]
    Contract(String),

    /// A numeric failure such as a non-finite loss.
    #[error("numeric failure: {0}")]
    Numeric(String),

    /// Checkpoint load/save problems.
    #[error("checkpoint error: {0}")]
    Checkpoint(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Exit code the CLI should terminate with for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Contract(_) => 2,
            Error::Data(_) | Error::Io(_) | Error::Json(_) | Error::Checkpoint(_) => 3,
            Error::Numeric(_) => 4,
        }
    }
}
