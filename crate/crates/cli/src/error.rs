//! Errors of the experiment runner.

use std::path::PathBuf;

use thiserror::Error;

/// Everything that can stop an experiment run.
#[derive(Debug, Error)]
pub enum CliError {
    /// Reading or writing a file failed.
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// The model library rejected a parameter or failed to evaluate.
    #[error(transparent)]
    Model(#[from] anscy::error::Error),

    /// The request itself is malformed.
    #[error("{0}")]
    Usage(String),
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
