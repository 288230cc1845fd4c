use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum WaveError {
    #[error("invalid trit value {0}")]
    InvalidTrit(u8),
    #[error("division by zero in F3")]
    DivisionByZero,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is singular")]
    Singular,
    #[error("index set is not an information set")]
    NotInformationSet,
    #[error("retry budget exhausted: {0}")]
    RetryBudget(String),
    #[error("infeasible request: {0}")]
    Infeasible(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("distribution error: {0}")]
    Distribution(String),
    #[error("root finding failed: {0}")]
    RootFinding(String),
    #[error("decoding error: {0}")]
    Decode(String),
    #[error("table mismatch: {0}")]
    TableMismatch(String),
}

pub type Result<T> = std::result::Result<T, WaveError>;
