use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum UmatchError {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("field mismatch: GF({left}) vs GF({right})")]
    FieldMismatch { left: u32, right: u32 },
    #[error("division by zero in GF({0})")]
    DivisionByZero(u32),
    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("duplicate index {0} in index sequence")]
    DuplicateIndex(usize),
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, UmatchError>;
