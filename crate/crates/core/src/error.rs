use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoreError {
    #[error("{0} is not an odd prime")]
    InvalidPrime(u32),

    #[error("internal degree {degree} exceeds the degree cap {cap}")]
    DegreeCap { degree: u32, cap: u32 },

    #[error("truncation insufficient: {0}")]
    Truncation(String),

    #[error("p-adic precision exhausted: need more than {precision} digits ({context})")]
    Precision { precision: u32, context: String },

    #[error("inconsistent complex: {0}")]
    InconsistentComplex(String),

    #[error("multidegree {0} is outside the built range")]
    OutOfRange(String),

    #[error("parity error: {0}")]
    Parity(String),

    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),

    #[error("filtration inconsistency: {0}")]
    Filtration(String),

    #[error("non-integral value in BP_*BP: {0}")]
    NonIntegral(String),

    #[error("audit failed: {0}")]
    Audit(String),

    #[error("mismatched inputs: {0}")]
    Mismatch(String),
}

pub type Result<T, E = CoreError> = std::result::Result<T, E>;
