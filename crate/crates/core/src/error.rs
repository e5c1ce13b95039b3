use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("invalid list assignment: {0}")]
    InvalidLists(String),

    #[error("coloring is partial: vertex {0} is uncolored")]
    PartialColoring(usize),

    #[error("instance has {n} vertices, above the subset-enumeration bound of {bound}")]
    Capacity { n: usize, bound: usize },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("catalog integrity: {0}")]
    CatalogIntegrity(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Parse(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
