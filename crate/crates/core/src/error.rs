use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("p = {0} is not prime")]
    NonPrimeP(u64),
    #[error("characteristic 2 is not supported")]
    EvenCharacteristic,
    #[error("k must be at least 1")]
    ZeroK,
    #[error("extension degree {m} is not one of k, 2k, 4k (k = {k})")]
    DegreeUnsupported { m: usize, k: usize },
    #[error("field of order {p}^{m} is too large for 64-bit exponent arithmetic")]
    FieldTooLarge { p: u64, m: usize },
    #[error("gcd(d, p^n - 1) = {0}, expected 2")]
    BadExponentGcd(u64),
    #[error("inverse of zero")]
    DivisionByZero,
    #[error("argument must be nonzero")]
    ZeroArgument,
    #[error("element is not in the subfield of degree {0}")]
    NotInSubfield(usize),
    #[error("{0} is not a divisor of the extension degree {1}")]
    NotASubfield(usize, usize),
    #[error("value is not a rational integer: {0}")]
    NotRationalInteger(String),
    #[error("index {index} out of range 0..{bound}")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("coefficients a and b are both zero")]
    BothCoefficientsZero,
    #[error("coefficient b must be nonzero")]
    ZeroB,
    #[error("curve coefficient C must be nonzero")]
    ZeroC,
    #[error("pair is not in the required case: {0}")]
    WrongCase(&'static str),
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("oracle mismatch: {0}")]
    OracleMismatch(String),
    #[error("bound violated: {0}")]
    BoundViolation(String),
    #[error("root count violation: {0}")]
    RootCountViolation(String),
    #[error("sequence periods differ: {0} vs {1}")]
    PeriodMismatch(usize, usize),
    #[error("cannot parse element {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
