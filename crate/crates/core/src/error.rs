use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("vacuous instance: no item fits the capacity")]
    VacuousInstance,
    #[error("domain violation: {0}")]
    DomainViolation(String),
    #[error("length mismatch: instance has {expected} items, solution has {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("zero denominator in rational input")]
    ZeroDenominator,
    #[error("not a witness: {0}")]
    NotAWitness(String),
    #[error("spread too large for exponent m = {m}: need a_1 > B_m*n*d_n^m + m")]
    SpreadTooLarge { m: u32 },
    #[error("instance too large for oracle: n = {n} exceeds enumeration cap {cap}")]
    TooLargeForOracle { n: usize, cap: usize },
    #[error("capacity exceeds pseudo-polynomial budget: capacity {capacity} > cap {cap}")]
    CapacityExceedsBudget { capacity: String, cap: u64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
