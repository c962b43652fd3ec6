use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed group file at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("unknown color {0}")]
    UnknownColor(usize),
    #[error("size budget exceeded: {0}")]
    Budget(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unsupported group: {0}")]
    Unsupported(String),
    #[error("reconstruction failed: {0}")]
    Reconstruction(String),
}

pub type Result<T> = std::result::Result<T, Error>;
