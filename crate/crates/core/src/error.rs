use thiserror::Error;

/// Errors raised when inputs violate an operation's preconditions.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid walk parameters n={n}, s={s}: need 1 <= s < n")]
    InvalidSpec { n: usize, s: usize },

    #[error("invalid generating set: {0}")]
    InvalidGeneratingSet(String),

    #[error("weight {k} lies outside the window |k - n/2| <= n*delta/2 (n={n}, delta={delta})")]
    OutsideWindow { n: usize, k: usize, delta: f64 },

    #[error("parity condition failed: {0}")]
    Parity(String),

    #[error("beta={0} must lie strictly between 1/4 and 1/2")]
    Beta(f64),

    #[error("layers {l} and {t} are not adjacent")]
    NotAdjacent { l: usize, t: usize },

    #[error("antipodality premise s < n/6 violated (n={n}, s={s}): the antipodal vertex is not guaranteed unique")]
    AntipodalityPremise { n: usize, s: usize },

    #[error("size {what}={value} exceeds the supported limit {limit}")]
    TooLarge {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed transcript line {line}: {reason}")]
    Transcript { line: usize, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
