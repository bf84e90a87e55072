use std::io;
use std::path::{Path, PathBuf};

use taskgrowth_core::Error as ModelError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("config error: {0}")]
    Config(String),
    #[error("model domain error: {0}")]
    Model(ModelError),
    #[error("simulation failed: {0}")]
    NonFinite(ModelError),
    #[error("insufficient data: {converged} converged rows, need at least {required}")]
    InsufficientData { converged: usize, required: usize },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },
}

impl Error {
    pub fn io(path: &Path, source: io::Error) -> Self {
        Error::Io { path: path.to_path_buf(), source }
    }

    pub fn format(path: &Path, message: impl Into<String>) -> Self {
        Error::Format { path: path.to_path_buf(), message: message.into() }
    }

    /// Process exit status for the command-line front end.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Config(_) | Error::Format { .. } => 2,
            Error::Model(_) => 3,
            Error::NonFinite(_) => 4,
            Error::InsufficientData { .. } => 5,
            Error::Io { .. } => 1,
        }
    }
}

impl From<ModelError> for Error {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::NonFiniteState { .. } | ModelError::SigmaDegenerate(_) => Error::NonFinite(e),
            ModelError::InvalidShock(msg) => Error::Config(format!("shock: {msg}")),
            other => Error::Model(other),
        }
    }
}
