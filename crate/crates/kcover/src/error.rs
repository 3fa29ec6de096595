use std::io;
use std::path::PathBuf;

/// Everything the front end can fail with. Each variant maps to its own
/// process exit code.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("unknown algorithm `{0}` (expected random, dgreedy or cgreedy)")]
    UnknownAlgorithm(String),
    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },
    #[error("{0}")]
    Budget(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::UnknownAlgorithm(_) => 3,
            Error::Parse { .. } => 4,
            Error::Budget(_) => 5,
            Error::Io { .. } => 6,
            Error::Validation(_) => 7,
            Error::Input(_) => 8,
            Error::Json(_) | Error::Csv(_) => 1,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

impl From<kcover_core::Error> for Error {
    fn from(e: kcover_core::Error) -> Self {
        match e {
            kcover_core::Error::BudgetExceeded(msg) => {
                Error::Budget(format!("oracle budget exceeded: {msg}"))
            }
            kcover_core::Error::ReportInvariant(msg) => Error::Validation(msg),
            other => Error::Input(other.to_string()),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
