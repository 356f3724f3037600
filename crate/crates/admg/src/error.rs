use thiserror::Error;

/// Everything that can go wrong in this crate.
///
/// Validation problems (bad input, violated preconditions) and numerical
/// failures are kept apart so callers can map them to different exit codes.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("duplicate vertex name `{0}`")]
    DuplicateVertex(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("self-loop at `{0}`")]
    SelfLoop(String),
    #[error("directed cycle through `{0}`")]
    DirectedCycle(String),
    #[error("too many vertices: {got} (limit {limit})")]
    TooManyVertices { got: usize, limit: usize },
    #[error("invalid order: {0}")]
    InvalidOrder(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    /// True for failures of floating point linear algebra rather than of
    /// the input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Numerical(_) | Error::Overflow(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
