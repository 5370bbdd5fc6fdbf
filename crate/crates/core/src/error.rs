use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid spec: {0}")]
    InvalidSpec(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("empty window")]
    EmptyWindow,

    #[error("no samples: {0}")]
    NoSamples(String),

    #[error("degenerate regression: {0}")]
    DegenerateRegression(String),

    #[error("cover sum {sum} exceeds twice the Hausdorff budget {budget}")]
    BudgetExceeded { sum: f64, budget: f64 },

    #[error("no porosity hole of radius {radius} found near x = {x}")]
    NoHole { x: f64, radius: f64 },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidSpec(msg.into()))
}
