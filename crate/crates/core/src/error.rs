use thiserror::Error;

/// Every failure the library can report.
///
/// Each variant maps to a stable kebab-case code (see [`Error::code`]) which is
/// what the command-line front end prints in its error objects.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cyclotomic order must be positive")]
    InvalidOrder,
    #[error("order {have} does not divide {target}")]
    IncompatibleOrders { have: u64, target: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid character: {0}")]
    InvalidCharacter(String),
    #[error("residue {residue} is not a canonical generator modulo {modulus}")]
    InvalidGenerator { residue: u64, modulus: u64 },
    #[error("character of modulus {modulus} is not primitive (conductor {conductor})")]
    NotPrimitive { modulus: u64, conductor: u64 },
    #[error("trivial character: use the classical Bernoulli number")]
    TrivialCharacter,
    #[error("prime {ell} divides the cyclotomic order {m}")]
    RamifiedUnsupported { ell: u64, m: u64 },
    #[error("coefficient denominator divisible by {ell}{}", index.map(|i| format!(" at index {i}")).unwrap_or_default())]
    NotIntegral { ell: u64, index: Option<usize> },
    #[error("parity mismatch: chi1(-1) chi2(-1) != (-1)^{k}")]
    NotOddCompatible { k: i64 },
    #[error("the Eisenstein series of level 1 and weight 2 is not defined")]
    UndefinedSeries,
    #[error("{m} divides the level {level}")]
    BadLevel { m: u64, level: u64 },
    #[error("matrix is not in SL2(Z): determinant {det}")]
    InvalidMatrix { det: i128 },
    #[error("representation is not odd: chi1(-1) chi2(-1) != (-1)^{k}")]
    NotOdd { k: i64 },
    #[error("weight hypothesis violated: need 2 <= k and ell > k + 1 (k = {k}, ell = {ell})")]
    WeightHypothesisViolated { k: i64, ell: u64 },
    #[error("character is not a multiplicative lift modulo {ell}")]
    NotALift { ell: u64 },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("bad prime {m}: {reason}")]
    BadPrime { m: u64, reason: String },
    #[error("weight 2 lattice sums are not supported")]
    WeightTwoUnsupported,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("place over ({ell}, {m}) cannot reduce values of order {order}")]
    IncompatiblePlace { ell: u64, m: u64, order: u64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Machine-readable error code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidOrder => "invalid-order",
            Error::IncompatibleOrders { .. } => "incompatible-orders",
            Error::DivisionByZero => "division-by-zero",
            Error::InvalidCharacter(_) => "invalid-character",
            Error::InvalidGenerator { .. } => "invalid-generator",
            Error::NotPrimitive { .. } => "not-primitive",
            Error::TrivialCharacter => "trivial-character",
            Error::RamifiedUnsupported { .. } => "ramified-unsupported",
            Error::NotIntegral { .. } => "not-integral",
            Error::NotOddCompatible { .. } => "not-odd-compatible",
            Error::UndefinedSeries => "undefined-series",
            Error::BadLevel { .. } => "bad-level",
            Error::InvalidMatrix { .. } => "invalid-matrix",
            Error::NotOdd { .. } => "not-odd",
            Error::WeightHypothesisViolated { .. } => "weight-hypothesis-violated",
            Error::NotALift { .. } => "not-a-lift",
            Error::PreconditionViolated(_) => "precondition-violated",
            Error::BadPrime { .. } => "bad-prime",
            Error::WeightTwoUnsupported => "weight-two-unsupported",
            Error::NotPrime(_) => "not-prime",
            Error::IncompatiblePlace { .. } => "incompatible-place",
            Error::InvalidInput(_) => "invalid-input",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
