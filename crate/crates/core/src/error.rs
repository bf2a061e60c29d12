use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("undefined input: {0}")]
    UndefinedInput(String),

    #[error("reducible cubic: {0}")]
    Reducible(String),

    #[error("zero discriminant")]
    ZeroDiscriminant,

    #[error("twist construction requires A = 0, got A = {0}")]
    NonDepressed(String),

    #[error("excluded parameter: {0}")]
    Excluded(String),

    #[error("singular reduction modulo {0}")]
    SingularReduction(u64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("internal inconsistency: {0}")]
    Internal(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
