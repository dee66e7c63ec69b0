use std::path::PathBuf;

/// Everything that can go wrong above the numerical core.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Rejected by the model (bad geometry, parameters out of range, ...).
    #[error(transparent)]
    Model(#[from] rispl_core::Error),
    /// Inconsistent or incomplete scenario.
    #[error("{0}")]
    Invalid(String),
    /// A file that could be read but not understood.
    #[error("{}: {msg}", path.display())]
    Parse { path: PathBuf, msg: String },
    /// One malformed record in a tabular input.
    #[error("{}: line {line}: {msg}", path.display())]
    Record { path: PathBuf, line: u64, msg: String },
    /// Reading or writing failed.
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

impl Error {
    /// Process exit status: 2 for I/O failures, 1 for everything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Io { .. } => 2,
            _ => 1,
        }
    }

    /// Wraps an I/O failure on `path`.
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
