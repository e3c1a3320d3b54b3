use std::path::{Path, PathBuf};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },
    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("{0}")]
    Core(#[from] hdgkit_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{} sample(s) failed: {}", .0.len(), .0.iter().map(|(id, e)| format!("{id}: {e}")).collect::<Vec<_>>().join("; "))]
    Samples(Vec<(String, String)>),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub fn io(path: impl AsRef<Path>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().to_path_buf(),
            source,
        }
    }

    pub fn format(path: impl AsRef<Path>, message: impl Into<String>) -> Self {
        Error::Format {
            path: path.as_ref().to_path_buf(),
            message: message.into(),
        }
    }

    /// 1 for bad input or configuration, 2 for failures while doing the work.
    pub fn exit_code(&self) -> i32 {
        use hdgkit_core::Error as C;
        match self {
            Error::Io { .. } => 2,
            Error::Core(
                C::SingleClass | C::TooFewRows(_) | C::ZeroImportance | C::EmptySelection { .. },
            ) => 2,
            _ => 1,
        }
    }
}
