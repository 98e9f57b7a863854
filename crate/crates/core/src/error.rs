use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("unsupported ring: {0}")]
    UnsupportedRing(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("invalid root ({i},{j}) for n = {n}")]
    InvalidRoot { i: usize, j: usize, n: usize },
    #[error("determinant is {0}, expected 1")]
    DeterminantNotOne(String),
    #[error("index {index} out of range for level {level}")]
    IndexOutOfRange { index: usize, level: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("not in symbol form: {0}")]
    NotSymbolForm(String),
    #[error("group order exceeds bound {bound} (enumerated {partial} elements so far)")]
    OrderBoundExceeded { bound: usize, partial: usize },
    #[error("parse error: {0}")]
    Parse(String),
}
