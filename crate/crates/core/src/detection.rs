//! False-alarm and detection probabilities.
//!
//! A detection is declared when the received power reaches the threshold
//! (`≥ η`). Noise enters as the constant `N_p` and the target as its mean
//! return `S0`, so both probabilities are exceedance probabilities of the
//! clutter return at a shifted argument:
//!
//! * `P_fa = P(C ≥ η - N_p)`
//! * `P_d  = P(C ≥ η - N_p - S0)`
//!
//! Both are exactly 1 when the argument is not positive, since `C ≥ 0`.

use crate::clutter::{clutter_spec_from_scenario, CompoundClutterSpec};
use crate::error::{Error, Result};
use crate::inversion::{cdf_from_cf, QuadratureOptions};
use crate::scenario::Scenario;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Analytic,
    MonteCarlo,
}

/// Operating point of the radar in one scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricResult {
    pub p_fa: f64,
    pub p_d: f64,
    /// `η - N_p`, W.
    pub threshold_margin_fa: f64,
    /// `η - N_p - S0`, W.
    pub threshold_margin_d: f64,
    pub method: Method,
}

/// `P(C ≥ x)` for the compound clutter return.
pub fn exceedance(spec: &CompoundClutterSpec, x: f64, opts: &QuadratureOptions) -> Result<f64> {
    if x <= 0.0 {
        return Ok(1.0);
    }
    if spec.lambda == 0.0 {
        return Ok(0.0);
    }
    // deep tail: the quadrature would need ~x/s panels for a negligible value
    if spec.tail_bound(x) < 1e-3 * opts.abs_tol {
        return Ok(0.0);
    }
    let cdf = cdf_from_cf(&spec.handle(), x, opts)?;
    Ok(1.0 - cdf)
}

pub fn pfa(scenario: &Scenario, opts: &QuadratureOptions) -> Result<f64> {
    let spec = clutter_spec_from_scenario(scenario)?;
    exceedance(&spec, false_alarm_margin(scenario), opts)
}

pub fn pd(scenario: &Scenario, opts: &QuadratureOptions) -> Result<f64> {
    let spec = clutter_spec_from_scenario(scenario)?;
    exceedance(&spec, detection_margin(scenario), opts)
}

pub fn false_alarm_margin(scenario: &Scenario) -> f64 {
    scenario.radar().threshold_w - scenario.noise_power()
}

pub fn detection_margin(scenario: &Scenario) -> f64 {
    scenario.radar().threshold_w - scenario.noise_power() - scenario.mean_signal_power()
}

/// `P_fa` and `P_d` together.
pub fn evaluate(scenario: &Scenario, opts: &QuadratureOptions) -> Result<MetricResult> {
    let spec = clutter_spec_from_scenario(scenario)?;
    let threshold_margin_fa = false_alarm_margin(scenario);
    let threshold_margin_d = detection_margin(scenario);
    Ok(MetricResult {
        p_fa: exceedance(&spec, threshold_margin_fa, opts)?,
        p_d: exceedance(&spec, threshold_margin_d, opts)?,
        threshold_margin_fa,
        threshold_margin_d,
        method: Method::Analytic,
    })
}

/// Threshold found by [`threshold_for_pfa`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdSolution {
    pub threshold_w: f64,
    /// `P_fa` at `threshold_w`.
    pub achieved_pfa: f64,
    /// The target sat above `1 - e^(-λ)` (within tolerance) and the
    /// threshold was pushed to just above the noise floor.
    pub at_boundary: bool,
}

/// Accepted `|P_fa(η) - target|`.
pub fn threshold_tolerance(target_pfa: f64) -> f64 {
    1e-6f64.max(1e-3 * target_pfa)
}

const MAX_BISECTIONS: usize = 400;

/// Numeric inverse of `η ↦ P_fa(η)` by bisection.
///
/// `P_fa` equals 1 at `η = N_p` and drops by the atom mass `e^(-λ)` just
/// above it, so targets above `1 - e^(-λ)` cannot be met; within the
/// tolerance of that bound (or exactly on it) the solution is the smallest
/// threshold above the noise floor, flagged as a boundary solution.
pub fn threshold_for_pfa(
    scenario: &Scenario,
    target_pfa: f64,
    opts: &QuadratureOptions,
) -> Result<ThresholdSolution> {
    if !(target_pfa > 0.0 && target_pfa < 1.0) {
        return Err(Error::InvalidParameter {
            name: "target_pfa",
            value: target_pfa,
            reason: "must lie strictly between 0 and 1",
        });
    }
    let spec = clutter_spec_from_scenario(scenario)?;
    let tol = threshold_tolerance(target_pfa);
    let ceiling = 1.0 - spec.atom();
    if spec.lambda == 0.0 || target_pfa > ceiling + tol {
        return Err(Error::UnattainableTarget {
            target: target_pfa,
            min: 0.0,
            max: ceiling,
        });
    }

    let noise = scenario.noise_power();
    let pfa_at = |eta: f64| exceedance(&spec, eta - noise, opts);
    if target_pfa >= ceiling {
        let threshold_w = noise.next_up();
        return Ok(ThresholdSolution {
            threshold_w,
            achieved_pfa: pfa_at(threshold_w)?,
            at_boundary: true,
        });
    }

    let span = spec.mean() + 60.0 * spec.mark_scale * (1.0 + (2.0 * spec.lambda).sqrt());

    let mut lo = noise;
    let mut hi = noise + span;
    let mut hi_pfa = pfa_at(hi)?;
    if hi_pfa > target_pfa + tol {
        return Err(Error::UnattainableTarget {
            target: target_pfa,
            min: hi_pfa,
            max: ceiling,
        });
    }
    // invariant: pfa(lo) > target ≥ pfa(hi), up to tolerance at hi
    for _ in 0..MAX_BISECTIONS {
        if (hi_pfa - target_pfa).abs() <= 1e-2 * tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let p = pfa_at(mid)?;
        if p > target_pfa {
            lo = mid;
        } else {
            hi = mid;
            hi_pfa = p;
        }
    }
    if (hi_pfa - target_pfa).abs() > tol {
        return Err(Error::UnattainableTarget {
            target: target_pfa,
            min: 0.0,
            max: ceiling,
        });
    }
    Ok(ThresholdSolution {
        threshold_w: hi,
        achieved_pfa: hi_pfa,
        at_boundary: false,
    })
}
