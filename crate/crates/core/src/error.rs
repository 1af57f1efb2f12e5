use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("mismatched groups: {0}")]
    GroupMismatch(String),
    #[error("homomorphism is not well defined: {0}")]
    NotWellDefined(String),
    #[error("infinite group: {0}")]
    Infinite(String),
    #[error("no solution: {0}")]
    Unsolvable(String),
    #[error("morphisms are not composable: {0}")]
    NotComposable(String),
    #[error("incompatible moduli: {0}")]
    IncompatibleModuli(String),
    #[error("bimodule is not exact in both variables: {0}")]
    NotBiexact(String),
    #[error("extension is not square zero: {0}")]
    NotSquareZero(String),
    #[error("sequence is not exact: {0}")]
    NotExact(String),
    #[error("composite is not zero: {0}")]
    NotZeroComposite(String),
    #[error("object lies outside the finite model: {0}")]
    OutsideModel(String),
    #[error("enumeration budget of {limit} exceeded while {context}")]
    Budget { limit: usize, context: String },
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
