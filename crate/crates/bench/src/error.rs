use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    /// Anything wrong with the resolved configuration; `origin` names the file or flag at fault.
    #[error("{origin}: {message}")]
    Config { origin: String, message: String },

    #[error("order fit needs at least 3 usable points, got {points}")]
    InsufficientData { points: usize },

    #[error("reference run failed: {0}")]
    Reference(nls_core::Error),

    #[error(transparent)]
    Core(#[from] nls_core::Error),

    #[error("{path}: {error}")]
    Io { path: PathBuf, error: std::io::Error },

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl BenchError {
    pub fn config(origin: impl Into<String>, message: impl Into<String>) -> Self {
        BenchError::Config { origin: origin.into(), message: message.into() }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, error: std::io::Error) -> Self {
        BenchError::Io { path: path.into(), error }
    }
}

pub type Result<T, E = BenchError> = std::result::Result<T, E>;
