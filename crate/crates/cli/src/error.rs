use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] racg::error::Error),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
    #[error("json output: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid configuration: {0}")]
    Config(String),
}

impl CliError {
    /// 2 for bad input (malformed or invalid group files, bad flags), 1 for
    /// everything else.
    pub fn exit_code(&self) -> i32 {
        use racg::error::Error;
        match self {
            CliError::Core(Error::Parse { .. })
            | CliError::Core(Error::InvalidInput(_))
            | CliError::Core(Error::UnknownGenerator(_))
            | CliError::Config(_) => 2,
            _ => 1,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
