//! Error type shared by every module of the crate.

use thiserror::Error;

/// Everything that can go wrong while configuring, evaluating or simulating.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A model parameter violates its precondition.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// A special function was called outside its supported domain.
    #[error("{function}: {detail}")]
    Domain { function: &'static str, detail: String },

    /// Adaptive quadrature ran out of subdivisions before meeting its tolerance.
    #[error("quadrature did not converge in {context}: estimate {estimate:e} with error {error:e}")]
    Quadrature { context: String, estimate: f64, error: f64 },

    /// A probability left the admissible window by more than rounding noise.
    #[error("{context}: probability {value} is outside [0, 1]")]
    Consistency { context: &'static str, value: f64 },

    /// An intermediate quantity became NaN or infinite.
    #[error("non-finite intermediate in {context}")]
    NonFinite { context: String },

    /// A configuration file could not be parsed or validated.
    #[error("config line {line}{}: {message}", key.as_ref().map(|k| format!(" (key `{k}`)")).unwrap_or_default())]
    Config {
        line: usize,
        key: Option<String>,
        message: String,
    },
}

/// Crate-wide result alias.
pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn domain(function: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            function,
            detail: detail.into(),
        }
    }

    pub(crate) fn non_finite(context: impl Into<String>) -> Self {
        Error::NonFinite {
            context: context.into(),
        }
    }
}

/// Returns `value` if it is finite, otherwise a [`Error::NonFinite`] tagged with `context`.
pub(crate) fn finite(value: f64, context: &str) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::non_finite(context))
    }
}

/// Checks a probability against the `[-1e-9, 1 + 1e-9]` window, then clamps it to `[0, 1]`.
pub(crate) fn checked_probability(value: f64, context: &'static str) -> Result<f64> {
    const SLACK: f64 = 1e-9;
    if !value.is_finite() || !(-SLACK..=1.0 + SLACK).contains(&value) {
        return Err(Error::Consistency { context, value });
    }
    Ok(value.clamp(0.0, 1.0))
}
