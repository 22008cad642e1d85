use thiserror::Error;

/// Errors raised anywhere in the engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("variable index {index} out of range for {nvars} variables")]
    IndexOutOfRange { index: usize, nvars: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("division by a zero-valued quantity")]
    DivisionByZero,

    #[error("{func} is undefined at {value}")]
    Domain { func: &'static str, value: f64 },

    #[error("jet order exhausted: a derivative was requested from an order-0 jet")]
    InsufficientOrder,

    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown identifier `{name}` at position {pos}")]
    UnknownIdentifier { name: String, pos: usize },

    #[error("metric is not positive definite at {point:?} (pivot {pivot} = {value})")]
    NotPositiveDefinite { point: Vec<f64>, pivot: usize, value: f64 },

    #[error("field is gradient-specified; its value is not available")]
    GradientOnly,

    #[error("scalar field required to be positive has value {value} at {point:?}")]
    NotPositive { point: Vec<f64>, value: f64 },

    #[error("alignment vector is degenerate (norm {norm})")]
    DegenerateAlign { norm: f64 },

    #[error("point {point:?} lies outside the chart domain (coordinate {coordinate})")]
    OutOfDomain { point: Vec<f64>, coordinate: String },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("unknown example `{0}`")]
    UnknownExample(String),

    #[error("invalid scenario: {0}")]
    Scenario(String),
}

impl Error {
    /// True for errors that come from evaluating a field at a bad point, as opposed
    /// to malformed input.
    pub fn is_domain_error(&self) -> bool {
        matches!(
            self,
            Error::DivisionByZero
                | Error::Domain { .. }
                | Error::NotPositiveDefinite { .. }
                | Error::NotPositive { .. }
                | Error::DegenerateAlign { .. }
                | Error::OutOfDomain { .. }
                | Error::Hypothesis(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
