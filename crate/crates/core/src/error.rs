use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("expected a positive integer, got 0")]
    ZeroArgument,

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("invalid rational literal {0:?}")]
    BadRational(String),

    #[error("unknown character syntax {0:?}")]
    UnknownCharacter(String),

    #[error("{0} is not a fundamental discriminant")]
    NonFundamentalDiscriminant(i64),

    #[error("exponent vector {exponents:?} does not match the generators of (Z/{modulus}Z)^*")]
    BadExponents { modulus: u64, exponents: Vec<u64> },

    #[error("character {0} is not real")]
    NotReal(String),

    #[error("invalid quadratic form {0:?}: coefficients must be positive integers")]
    BadForm(String),

    #[error("invalid range {0:?}: expected lo..hi with 1 <= lo <= hi")]
    BadRange(String),

    #[error("schema violation: {0}")]
    Schema(String),

    #[error("dilation must be >= 1")]
    ZeroDilation,

    #[error("mixed weight: terms use h = {first} and h = {second}")]
    MixedWeight { first: u32, second: u32 },

    #[error("formula has no terms")]
    EmptyFormula,

    #[error("value at n = {0} is not a rational number")]
    NotRational(u64),

    #[error("even rank required (form has {0} variables)")]
    OddRank(usize),

    #[error("weight {0} is below 2; forms need at least 4 variables")]
    WeightTooSmall(u32),

    #[error("training range has {rows} rows but the basis has {columns} elements")]
    TrainingTooShort { rows: usize, columns: usize },

    #[error("target coefficients are missing beyond n = {0}")]
    TargetTooShort(u64),

    #[error("inconsistent system: no combination of the level {level} basis matches the training coefficients")]
    InconsistentSystem { level: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
