use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NonPrime(u64),
    #[error("modulus is reducible over F_p")]
    ReducibleModulus,
    #[error("modulus must be monic of degree {expected} with digits below p")]
    DegreeMismatch { expected: usize },
    #[error("PolicyBound: field order {order} exceeds the policy bound {bound}")]
    PolicyBound { order: u64, bound: u64 },
    #[error("operands belong to different fields")]
    ContextMismatch,
    #[error("twist steps differ ({0} vs {1})")]
    TwistMismatch(u32, u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("division by the zero polynomial")]
    DivisionByZeroPoly,
    #[error("gcd of two zero polynomials is undefined")]
    BothZero,
    #[error("linear system is singular")]
    SingularSystem,
    #[error("polynomial does not permute the field")]
    NotAPermutation,
    #[error("element is not in the eigenring")]
    NotInRing,
    #[error("instance too large for exhaustive search (degree * e = {0} > 12)")]
    TooLarge(usize),
    #[error("degree {degree} is not below the field order {order}")]
    DegreeTooLarge { degree: u64, order: u64 },
    #[error("degree bound {0} admits no quadratic Dembowski-Ostrom term")]
    DegreeBoundTooSmall(u64),
    #[error("attack failed after {rounds_used} rounds")]
    AttackFailed { rounds_used: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error at line {line}, column {column}: {msg}")]
    Parse { line: usize, column: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Parse {
            line: err.line(),
            column: err.column(),
            msg: err.to_string(),
        }
    }
}
