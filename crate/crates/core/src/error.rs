use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input lies outside the domain of the operation.
    #[error("domain error: {field} = {value} ({reason})")]
    Domain {
        field: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("no sign change on bracket [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    Bracket { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("non-finite function value f({x}) = {value}")]
    Evaluation { x: f64, value: f64 },

    #[error("root solver did not converge after {iterations} iterations (bracket width {width})")]
    RootNotConverged { iterations: usize, width: f64 },

    /// Parameters too large for the requested Fock-space truncation.
    #[error("truncation error: {0}")]
    Truncation(String),

    #[error("quadrature did not converge: value {value}, estimated error {estimated_error}")]
    Quadrature { value: f64, estimated_error: f64 },

    #[error("empty mode lattice")]
    EmptyLattice,
}

/// Returns `Ok(value)` if `value` is finite and strictly positive.
pub(crate) fn positive(field: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::Domain {
            field,
            value,
            reason: "must be finite and > 0",
        })
    }
}
