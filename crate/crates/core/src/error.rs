//! Crate-wide error type.

use thiserror::Error;

use crate::field::FieldError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("{0} variables requested; at most {max} are supported", max = crate::ring::MAX_VARS)]
    TooManyVariables(usize),
    #[error("syntax error at column {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable {name:?} at column {pos}")]
    UnknownVariable { name: String, pos: usize },
    #[error("input is not homogeneous")]
    NonHomogeneous,
    #[error("the ideal is the unit ideal")]
    UnitIdeal,
    #[error("the quotient ring is not Artinian")]
    NotArtinian,
    #[error("the ideal is not generated by quadrics")]
    NotQuadratic,
    #[error("input is zero")]
    ZeroInput,
    #[error("need at least {need} variables, got {got}")]
    TooFewVariables { need: usize, got: usize },
    #[error("matrix has odd size {0}; use submaximal Pfaffians")]
    OddSize(usize),
    #[error("matrix has even size {0}; submaximal Pfaffians need odd size")]
    EvenSize(usize),
    #[error("matrix is not alternating: {0}")]
    NotAlternating(String),
    #[error("precondition not met: {0}")]
    PreconditionUnmet(String),
    #[error("{0}")]
    Usage(String),
    #[error("I/O error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
