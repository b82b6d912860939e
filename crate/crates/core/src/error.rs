use thiserror::Error;

/// Errors raised by the analytic and simulation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("infeasible duty cycle: xi = {xi} gives beamwidth {beamwidth} rad wider than the search sector {omega} rad")]
    InfeasibleDutyCycle { xi: f64, beamwidth: f64, omega: f64 },

    #[error("configuration error: {0}")]
    Configuration(String),

    #[error(
        "series oracle infeasible: lambda = {lambda} needs more than {cap} terms for tol = {tol}"
    )]
    OracleInfeasible { lambda: f64, tol: f64, cap: usize },

    #[error("quadrature did not converge after {panels} panels (estimate {estimate}, error bound {error_bound})")]
    ConvergenceFailure {
        estimate: f64,
        error_bound: f64,
        panels: usize,
    },

    #[error("target false-alarm probability {target} is unattainable; attainable range is [{min}, {max}]")]
    UnattainableTarget { target: f64, min: f64, max: f64 },

    #[error("invalid geometry: clutter cell half-depth {half_depth} m reaches the radar at range {r_c} m")]
    InvalidGeometry { r_c: f64, half_depth: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be positive and finite",
        })
    }
}

pub(crate) fn non_negative(name: &'static str, value: f64) -> Result<f64> {
    if value >= 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be non-negative and finite",
        })
    }
}
