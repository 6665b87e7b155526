use thiserror::Error;

/// Library-wide error type.
#[derive(Debug, Error)]
pub enum AlcError {
    #[error("width mismatch: expected {expected} atoms, got {got}")]
    WidthMismatch { expected: usize, got: usize },

    #[error("arity mismatch for {op}: expected {expected} arguments, got {got}")]
    ArityMismatch {
        op: String,
        expected: usize,
        got: usize,
    },

    #[error("operator {op} is not part of the {sig} signature")]
    SignatureMismatch { op: String, sig: String },

    #[error("index {index} out of range for dimension {dim}")]
    IndexOverflow { index: usize, dim: usize },

    #[error("invalid atom structure: {0}")]
    InvalidStructure(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unbound variable {0}")]
    UnboundVariable(String),

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("unknown atom {0}")]
    UnknownAtom(String),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, AlcError>;
