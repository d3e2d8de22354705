use thiserror::Error;

/// Domain and plumbing errors shared by every module.
///
/// `code()` gives the stable identifier the CLI and the C interface report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("p = {0} is not prime")]
    CompositeP(u64),
    #[error("modulus is not irreducible of degree {0}")]
    ReducibleModulus(u32),
    #[error("twist exponent b = {0} must be at least 2")]
    BadTwist(u64),
    #[error("extension degree must be at least 1")]
    BadDegree,
    #[error("field of order {0} exceeds the supported table size")]
    FieldTooLarge(u128),
    #[error("sigma is the identity; use the D(r, a) branch")]
    SigmaIsIdentity,
    #[error("sigma is not the identity")]
    SigmaNotIdentity,
    #[error("no solution of the norm equation in extensions of degree <= {0}")]
    NoSolutionWithinBound(u32),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("denominator {0} is not prime to b = {1}")]
    DenominatorNotPrimeToB(i64, u64),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("a must be nonzero")]
    ZeroA,
    #[error("base-change matrix is singular at working precision")]
    SingularP,
    #[error("isomorphism conditions fail: {0}")]
    ConditionsFail(String),
    #[error("ratio n/(b^d-1) = n'/(b^d'-1) does not hold")]
    RatioMismatch,
    #[error("realized field is too small: {0}")]
    FieldTooSmall(String),
    #[error("t = {0} is not prime to p")]
    TNotCoprimeToP(u64),
    #[error("d/d' = {0} is not equal to p")]
    TNotP(u64),
    #[error("a must be 1")]
    ANotOne,
    #[error("congruence level N = {n} does not exceed the bound {bound}")]
    BoundViolated { n: i64, bound: String },
    #[error("pigeonhole search exceeded {0} iterations")]
    StateSpaceExceeded(u64),
    #[error("sigma mode mismatch: a must be present exactly when sigma = id")]
    MismatchedSigmaMode,
    #[error("module is not etale at working precision")]
    NotEtale,
    #[error("integer overflow: {0}")]
    Overflow(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::CompositeP(_) => "CompositeP",
            Error::ReducibleModulus(_) => "ReducibleModulus",
            Error::BadTwist(_) => "BadTwist",
            Error::BadDegree => "BadDegree",
            Error::FieldTooLarge(_) => "FieldTooLarge",
            Error::SigmaIsIdentity => "SigmaIsIdentity",
            Error::SigmaNotIdentity => "SigmaNotIdentity",
            Error::NoSolutionWithinBound(_) => "NoSolutionWithinBound",
            Error::PrecisionExhausted(_) => "PrecisionExhausted",
            Error::DenominatorNotPrimeToB(..) => "DenominatorNotPrimeToB",
            Error::ZeroDenominator => "ZeroDenominator",
            Error::ZeroA => "ZeroA",
            Error::SingularP => "SingularP",
            Error::ConditionsFail(_) => "ConditionsFail",
            Error::RatioMismatch => "RatioMismatch",
            Error::FieldTooSmall(_) => "FieldTooSmall",
            Error::TNotCoprimeToP(_) => "TNotCoprimeToP",
            Error::TNotP(_) => "TNotP",
            Error::ANotOne => "ANotOne",
            Error::BoundViolated { .. } => "BoundViolated",
            Error::StateSpaceExceeded(_) => "StateSpaceExceeded",
            Error::MismatchedSigmaMode => "MismatchedSigmaMode",
            Error::NotEtale => "NotEtale",
            Error::Overflow(_) => "Overflow",
            Error::InvalidInput(_) => "InvalidInput",
            Error::Internal(_) => "Internal",
        }
    }

    pub(crate) fn precision(what: impl Into<String>) -> Self {
        Error::PrecisionExhausted(what.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
