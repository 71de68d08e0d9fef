use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field of order {p}^{m} exceeds the supported bound 2^20")]
    FieldTooLarge { p: u64, m: u32 },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("operands live over different fields")]
    FieldMismatch,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is singular")]
    Singular,
    #[error("polynomial is reducible")]
    Reducible,
    #[error("{what} exceeded bound {bound} (reached {reached})")]
    BoundExceeded {
        what: String,
        bound: usize,
        reached: usize,
    },
    #[error("element does not lie in {0}")]
    NotMember(String),
    #[error("unsupported group: {0}")]
    Unsupported(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("recipe refused: {0}")]
    Refused(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    pub fn bound(what: impl Into<String>, bound: usize, reached: usize) -> Self {
        Error::BoundExceeded {
            what: what.into(),
            bound,
            reached,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
