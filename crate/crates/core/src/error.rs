use thiserror::Error;

/// Errors raised by model construction and the solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("invalid degree distribution: {0}")]
    InvalidDistribution(String),

    #[error("game parameters violate {rule}: {detail}")]
    AssumptionViolated { rule: &'static str, detail: String },

    #[error(
        "equilibrium search did not converge after {iterations} iterations; final bracket [{lo}, {hi}]"
    )]
    NotConverged { iterations: usize, lo: f64, hi: f64 },

    #[error("{what} = {value} exceeds the enumeration bound {max}")]
    TooLarge { what: &'static str, value: usize, max: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }

    /// True for errors caused by bad input, as opposed to a failed computation.
    pub fn is_invalid_input(&self) -> bool {
        !matches!(self, Error::NotConverged { .. })
    }
}
