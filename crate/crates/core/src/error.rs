use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Sample is empty, or every value is zero so the total is not positive.
    #[error("degenerate sample: {0}")]
    DegenerateSample(String),

    #[error("invalid sample value {value} at position {index}")]
    InvalidValue { index: usize, value: f64 },

    #[error("value out of domain: {0}")]
    Domain(String),

    #[error("bottom share is zero, ratio {0} is undefined")]
    DivisionByZeroShare(String),

    #[error("zero income not allowed: {0}")]
    ZeroIncome(String),

    #[error("calibration undefined: {0}")]
    CalibrationDomain(String),

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("arity mismatch: {ratios} ratios but {weights} weights")]
    Arity { ratios: usize, weights: usize },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("panel is not a single cross-section: {0}")]
    MixedPanel(String),

    #[error("country sets differ (only in first: {only_in_a:?}; only in second: {only_in_b:?})")]
    Join {
        only_in_a: Vec<String>,
        only_in_b: Vec<String>,
    },

    #[error("not found: {0}")]
    NotFound(String),
}
