use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NonPrime(u32),
    #[error("field of order {p}^{e} exceeds 2^16")]
    FieldTooLarge { p: u32, e: u32 },
    #[error("extension degree must be at least 1")]
    InvalidDegree,
    #[error("element index {index} out of range for a field of order {order}")]
    InvalidElement { index: u64, order: usize },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands are defined over different fields")]
    FieldMismatch,
    #[error("shape mismatch: expected {expected}, got {got}")]
    ShapeMismatch { expected: String, got: String },
    #[error("generators are linearly dependent")]
    DependentGenerators,
    #[error("basis elements are linearly dependent")]
    DependentBasis,
    #[error("the code has dimension 0")]
    TrivialCode,
    #[error("enumeration needs {required} items but the cap is {cap}")]
    TooLargeToEnumerate { required: String, cap: u64 },
    #[error("simple error model exhausted {0} retries")]
    RetriesExhausted(u32),
    #[error("parameter regime not supported: {0}")]
    ParameterRegime(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("reduction mismatch: {0}")]
    MismatchDetected(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn shape(expected: impl ToString, got: impl ToString) -> Self {
        Error::ShapeMismatch {
            expected: expected.to_string(),
            got: got.to_string(),
        }
    }
}
