use thiserror::Error;

/// Errors raised by the arithmetic, evaluation and verification layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("{0} is not irreducible")]
    NotIrreducible(String),
    #[error("not a unit: {0} is divisible by v")]
    NotAUnit(String),
    #[error("denominator not a v-unit: {0}")]
    DenominatorNotUnit(String),
    #[error("unsupported residue modulus {0}: only powers of an irreducible polynomial (times a unit) are allowed")]
    UnsupportedModulus(String),
    #[error("representative not canonical: deg {rep} >= {bound}")]
    NonCanonicalRepresentative { rep: usize, bound: usize },
    #[error("sigma not a unit: {0}")]
    SigmaNotUnit(String),
    #[error("precision unreachable: level {level} needs degree strata beyond i_max = {i_max}")]
    PrecisionUnreachable { level: u32, i_max: u32 },
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("negative exponent on FULL domain")]
    NegativeExponentOnFullDomain,
    #[error("schedule exhausted before reaching level {0}")]
    ScheduleExhausted(u32),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("internal consistency failure: {0}")]
    Consistency(String),
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
