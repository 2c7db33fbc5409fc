use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("graft needs 1 or 2 children, got {0}")]
    Arity(usize),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("enumeration size {requested} exceeds ceiling {ceiling}")]
    Ceiling { requested: usize, ceiling: usize },

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("grid mismatch between operands")]
    GridMismatch,

    #[error("negative time {0}")]
    NegativeTime(f64),

    #[error("divergent regime: {0}")]
    Divergent(String),

    #[error("insufficient data for fit: {0}")]
    InsufficientData(String),

    #[error("recursion depth {0} exceeds guard")]
    DepthGuard(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error("config: {0}")]
    Config(String),
}
