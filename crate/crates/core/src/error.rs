use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("enumeration bound exceeded while {0}")]
    BoundExceeded(String),
    #[error("requested depth {requested} exceeds complex depth {depth}")]
    DepthExceeded { requested: usize, depth: usize },
    #[error("preorder has no points")]
    EmptyPreorder,
    #[error("level {0} of the chain is empty")]
    EmptyLevel(usize),
    #[error("flatness failure at object {object}, stage {stage}: {detail}")]
    FlatnessFailure { object: String, stage: usize, detail: String },
    #[error("no factorization oracle available for {0}")]
    OracleUnavailable(String),
    #[error("unknown identifier `{0}`")]
    Unknown(String),
}

pub type Result<T> = std::result::Result<T, Error>;
