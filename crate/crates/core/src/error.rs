use thiserror::Error;

/// Errors raised by field, polynomial, matrix and quality operations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("extension degree must be at least 1")]
    ZeroExtension,
    #[error("field order {0} exceeds the supported bound 2^16")]
    OrderTooLarge(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("polynomials belong to different fields")]
    FieldMismatch,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("digit {digit} is out of range for base {base}")]
    DigitOutOfRange { digit: u32, base: u32 },
    #[error("polynomial must be monic")]
    NotMonic,
    #[error("polynomial with code {0} is reducible")]
    Reducible(u64),
    #[error("polynomial degree must be at least 1")]
    ConstantPolynomial,
    #[error("numerator polynomial g shares a factor with the modulus")]
    NotCoprime,
    #[error("direction matrix of size {got} does not match polynomial degree {expected}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("invalid direction numbers: {0}")]
    InvalidDirection(String),
    #[error("index {index} exceeds the {cols} stored index digits")]
    IndexOverflow { index: u64, cols: usize },
    #[error("requested m = {m} exceeds the {available} stored columns")]
    TooManyColumns { m: usize, available: usize },
    #[error("point set has {got} points, expected {expected}")]
    WrongCardinality { expected: usize, got: usize },
    #[error("matrices do not share a common field and extent")]
    IncompatibleMatrices,
    #[error("projection family is empty")]
    EmptyFamily,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("direction table provides {got} dimensions, {needed} requested")]
    TableTooShort { needed: usize, got: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("I/O error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse {
            line: e.line(),
            message: e.to_string(),
        }
    }
}
