use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Two operands carry scalars of incompatible shape (jets of different order).
    #[error("scalar context mismatch: {left} vs {right}")]
    ContextMismatch { left: String, right: String },

    #[error("unit factor must have no constant term")]
    ConstantTerm,

    #[error("invalid resonance parameters: {0}")]
    Resonance(String),

    #[error("maximal order must be at least 1, got {0}")]
    NonPositiveOrder(i64),

    #[error("polynomial is not homogeneous of degree {expected}")]
    NotHomogeneous { expected: u32 },

    #[error("rank deficient: rank {rank}, need {required}")]
    RankDeficient { rank: usize, required: usize },

    #[error("degree gate violated: n = {n} but constructions need n >= p + q + 3 = {min}")]
    Gate { n: u64, min: u64 },

    #[error("congruence has no solution: {0}")]
    Congruence(String),

    #[error("parse error at {at}: {msg}")]
    Parse { at: String, msg: String },

    #[error("invalid system: {0}")]
    InvalidSystem(String),

    /// A mathematical expectation was checked and did not hold.
    #[error("falsified: {0}")]
    Falsified(String),
}

impl Error {
    pub(crate) fn parse(at: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Parse {
            at: at.into(),
            msg: msg.into(),
        }
    }

    /// True for errors that report a failed mathematical expectation rather
    /// than bad input.
    pub fn is_falsification(&self) -> bool {
        matches!(self, Error::Falsified(_) | Error::RankDeficient { .. })
    }
}
