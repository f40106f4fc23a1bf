use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not squarefree")]
    NotSquarefree(i64),
    #[error("d = {0} does not define a quadratic field")]
    DegenerateD(i64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live in different fields (d = {0} and d = {1})")]
    FieldMismatch(i64, i64),
    #[error("element {0} is not integral")]
    NotIntegral(String),
    #[error("element {0} is a unit")]
    UnitInput(String),
    #[error("d = {0} defines an imaginary field")]
    ImaginaryField(i64),
    #[error("zero ideal")]
    ZeroIdeal,
    #[error("{0} is not prime")]
    NotPrime(i64),
    #[error("{0} is not an odd prime")]
    NotOddPrime(i64),
    #[error("ideal class is trivial")]
    TrivialClass,
    #[error("no generator found for a principal ideal power: {0}")]
    GeneratorNotFound(String),
    #[error("empty field list")]
    EmptyConfig,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}
