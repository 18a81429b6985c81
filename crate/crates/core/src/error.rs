use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("radius {radius} exceeds the configured maximum {max}")]
    RadiusTooLarge { radius: usize, max: usize },

    #[error("set expression is not cone-expressible: {0}")]
    NotNormalizable(String),

    #[error("search exhausted: {0}")]
    SearchExhausted(String),

    #[error("depth {have} does not determine the value (need {need})")]
    DepthInsufficient { have: usize, need: usize },

    #[error("index {index} out of range (have {len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("incompatible middles: {0}")]
    IncompatibleMiddles(String),

    #[error("counting hypothesis violated on cylinder {cell}: lhs {lhs}, rhs {rhs}")]
    HypothesisViolated { cell: String, lhs: usize, rhs: usize },

    #[error("no matching found up to depth cap {cap}")]
    DepthCapExceeded { cap: usize },

    #[error("filling oracle failed: {0}")]
    OracleFailed(String),

    #[error("stabilizer not verifiably trivial: {0}")]
    StabilizerNotVerifiablyTrivial(String),

    #[error("transversal incomplete for radius {radius}: {detail}")]
    TransversalIncomplete { radius: usize, detail: String },

    #[error("{step} failed: {detail}")]
    StepFailed { step: String, detail: String },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("json: {0}")]
    Json(String),
}

impl Error {
    pub(crate) fn step(step: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::StepFailed { step: step.into(), detail: detail.into() }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
