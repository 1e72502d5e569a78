use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("artin ring: {0}")]
    Artin(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("degree error: {0}")]
    Degree(String),
    #[error("invalid structure: {0}")]
    Invalid(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("lifting obstruction at order {order}: {detail}")]
    Obstruction { order: usize, detail: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
