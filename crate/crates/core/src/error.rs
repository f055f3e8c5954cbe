use thiserror::Error;

/// Errors raised by state construction, transforms and the joint-state builders.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("invalid parameter `{name}`: {reason}")]
    Parameter { name: &'static str, reason: String },

    #[error("state is not normalized: norm = {norm} (tolerance {tolerance:e})")]
    NotNormalized { norm: f64, tolerance: f64 },

    #[error("contract violated: {0}")]
    Contract(String),

    #[error("matrix of {requested} elements exceeds the element budget of {budget}")]
    Budget { requested: usize, budget: usize },

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::Parameter {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
