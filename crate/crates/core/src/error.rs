use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero element where a unit is required")]
    ZeroElement,
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
    #[error("unsupported input: {0}")]
    UnsupportedInput(String),
    #[error("invalid field description: {0}")]
    InvalidField(String),
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("forms must have positive dimension")]
    EmptyForm,
    #[error("Gram matrix is degenerate")]
    Degenerate,
    #[error("Gram matrix is not symmetric")]
    NotSymmetric,
    #[error("inconsistent invariants: {0}")]
    InconsistentInvariants(String),
    #[error("{0} is a square")]
    SquareArgument(String),
    #[error("polynomial is not square-free")]
    NotSquareFree,
    #[error("polynomial is not monic")]
    NonMonic,
    #[error("search exhausted: {0}")]
    SearchExhausted(String),
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("zero entry in a diagonal form")]
    ZeroEntry,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
}

pub type Result<T> = std::result::Result<T, Error>;
