use thiserror::Error;

/// Errors raised by evaluators, samplers and checks.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// The evaluation point lies outside the open region where the law has a density.
    #[error("point outside the domain: {0}")]
    Domain(String),

    /// A result is not representable as a finite `f64`.
    #[error("result out of range: {0}")]
    Range(String),

    /// A parameter violates its invariant (non-positive rate, empty grid, ...).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Quadrature ran out of budget. `estimate` is the best value reached.
    #[error("quadrature did not converge: estimate {estimate:e}, error bound {error:e}")]
    NotConverged { estimate: f64, error: f64 },

    /// The requested combination has no closed form in this library.
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_positive(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} must be positive and finite, got {value}"
        )))
    }
}
