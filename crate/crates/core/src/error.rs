use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("size guard exceeded: {0}")]
    Guard(String),

    #[error("index ({x}, {y}) outside domain {rows}x{cols}")]
    OutOfDomain {
        x: usize,
        y: usize,
        rows: usize,
        cols: usize,
    },

    #[error("domain mismatch: {0}")]
    DomainMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("linear program infeasible: {0}")]
    Infeasible(String),

    #[error("linear program unbounded: {0}")]
    Unbounded(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invariant violated: {invariant}; witness: {witness}")]
    Violation { invariant: String, witness: String },

    #[error("{0}")]
    NotConverged(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub fn violation(invariant: impl Into<String>, witness: impl Into<String>) -> Self {
        Error::Violation {
            invariant: invariant.into(),
            witness: witness.into(),
        }
    }
}
