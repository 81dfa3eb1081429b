use thiserror::Error;

/// Errors raised by the subshift, clopen, group and presentation layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("invalid substitution: {0}")]
    InvalidSubstitution(String),

    #[error("substitution is not primitive")]
    NotPrimitive,

    #[error("system failed the aperiodicity check up to depth {depth}")]
    NotAperiodic { depth: usize },

    #[error("system has a word of length five with a repeated symbol")]
    DaggerViolated,

    #[error("word {0} is not in the language")]
    NotInLanguage(String),

    #[error("word too short: length {len}, need at least {min}")]
    TooShort { len: usize, min: usize },

    #[error("search for {what} exceeded the ceiling {ceiling}")]
    SearchCeilingExceeded { what: &'static str, ceiling: usize },

    #[error("radius {radius} too small for cylinder {cylinder}")]
    RadiusTooSmall { radius: usize, cylinder: String },

    #[error("pieces do not partition the space")]
    NotAPartition,

    #[error("cocycle does not define a bijection")]
    NotBijective,

    #[error("U, TU and T^2 U are not pairwise disjoint")]
    OverlapViolation,

    #[error("invalid seed point: {0}")]
    InvalidSeed(String),

    #[error("tower of height {height} at level {level}; need at least 3")]
    TowerTooShort { level: usize, height: usize },

    #[error("seed points not separated within orbit depth {depth}")]
    SeedOrbitNotSeparated { depth: usize },

    #[error("unsupported cylinder for expansion: {0}")]
    UnsupportedOffset(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
