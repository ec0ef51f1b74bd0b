use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: line {line}: {message}")]
    Line { path: PathBuf, line: usize, message: String },
    #[error("archive: {0}")]
    Archive(String),
    #[error("pipeline spec: {0}")]
    Spec(String),
    #[error("model {kind}: {message}")]
    Resource { kind: String, message: String },
    #[error(transparent)]
    Core(#[from] stacksa_core::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}
