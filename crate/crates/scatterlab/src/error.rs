use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field of size {p}^{degree} exceeds the configured cap 2^{cap_bits}")]
    DegreeOverflow { p: u64, degree: u32, cap_bits: u32 },
    #[error("polynomial is not monic")]
    NonMonic,
    #[error("{m} does not divide the extension degree {n}")]
    BadTowerLevel { m: u32, n: u32 },
    #[error("argument does not lie in the subfield of degree {0}")]
    NotInSubfield(u32),
    #[error("zero input where a nonzero element is required")]
    ZeroInput,
    #[error("operands belong to different field contexts")]
    CtxMismatch,
    #[error("exponents coincide modulo n")]
    DegenerateBinomial,
    #[error("field of size {size} exceeds the scan cap {cap}")]
    ScanCapExceeded { size: u64, cap: u64 },
    #[error("binomial is not normalized: {0}")]
    NotNormalized(String),
    #[error("relative norm of the coefficient equals 1")]
    NormOne,
    #[error("outside the supported (n, gcd) range: {0}")]
    OutOfTheoremScope(String),
    #[error("variable count mismatch: {0} vs {1}")]
    VarCountMismatch(usize, usize),
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("gcd(J-I, n) = {0}, expected 1")]
    GcdNotOne(u32),
    #[error("degree {0} in the leading variable exceeds 2")]
    DegreeTooHigh(u32),
    #[error("no admissible point construction: {0}")]
    CaseSelectionFailed(String),
    #[error("elimination denominator vanishes identically")]
    EliminationDegenerate,
    #[error("no certificate point in a sweep of {0} candidates")]
    SearchExhausted(usize),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("beta must avoid 0 and 1")]
    BetaDegenerate,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
