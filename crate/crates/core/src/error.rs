use thiserror::Error;

/// Errors reported by the library. Verification failures (counterexamples,
/// certificate mismatches) are data, not errors; these are precondition and
/// contract violations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("gcd(0, 0) is undefined")]
    GcdOfZeros,
    #[error("valuation of zero is infinite")]
    ZeroValuation,
    #[error("{0} is not a prime")]
    NotPrime(String),
    #[error("expected a positive integer, got {0}")]
    NotPositive(String),
    #[error("even root (n = {n}) of negative value {value}")]
    NegativeEvenRoot { n: u32, value: String },
    #[error("root index must be at least 1")]
    ZeroRootIndex,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("contract violated: {0}")]
    Contract(String),
    #[error("valuation of {prime} in C = {c} is {valuation} >= 7")]
    LevelHypothesis { c: String, prime: String, valuation: u32 },
    #[error("level {level} is outside the newform table (covers 1..={max})")]
    OutsideTable { level: u64, max: u64 },
    #[error("newform table: {0}")]
    Table(String),
    #[error("unknown polynomial symbol `{0}`")]
    MissingAssignment(String),
    #[error("checkpoint: {0}")]
    Checkpoint(String),
}

pub type Result<T> = std::result::Result<T, Error>;
