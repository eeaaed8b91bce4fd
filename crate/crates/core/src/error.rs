use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoreError {
    #[error("field: {0}")]
    Field(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("presentation: {0}")]
    Presentation(String),
    #[error("inconclusive: raise bound ({0})")]
    Inconclusive(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
