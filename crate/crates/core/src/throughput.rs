//! Duty-cycle coupled ISAC throughput.
//!
//! A longer radar share `ξ` of the cycle allows a narrower beam, which
//! raises the gain and with it `P_d`; the remaining `1 - ξ` of the cycle
//! carries data to the detected users.

use rayon::prelude::*;

use crate::detection::pd;
use crate::error::{Error, Result};
use crate::inversion::QuadratureOptions;
use crate::scenario::{range_resolution, Scenario};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThroughputPoint {
    pub xi: f64,
    pub delta_psi: f64,
    pub p_d: f64,
    /// Expected number of detected users.
    pub beta: f64,
    /// Network throughput, bit/s.
    pub gamma: f64,
}

/// `β = P_d·ρ_t·Ω·r_t·cτ/2`: users in the annular sector at the target
/// range, weighted by the detection probability.
pub fn expected_detected_targets(scenario: &Scenario, p_d: f64) -> Result<f64> {
    let isac = scenario.isac_or_err()?;
    if !(0.0..=1.0).contains(&p_d) {
        return Err(Error::InvalidParameter {
            name: "p_d",
            value: p_d,
            reason: "must be a probability",
        });
    }
    let target = scenario.target();
    Ok(p_d
        * target.density_per_m2
        * isac.search_sector_rad
        * target.range_m
        * range_resolution(scenario.radar().bandwidth_hz))
}

/// `γ = β·(1 - ξ)·D` at the scenario's beamwidth.
pub fn network_throughput(
    scenario: &Scenario,
    opts: &QuadratureOptions,
) -> Result<ThroughputPoint> {
    throughput_at(scenario, pd(scenario, opts)?)
}

/// Throughput for a detection probability computed elsewhere.
pub fn throughput_at(scenario: &Scenario, p_d: f64) -> Result<ThroughputPoint> {
    let isac = scenario.isac_or_err()?;
    let beta = expected_detected_targets(scenario, p_d)?;
    let xi = isac.duty_cycle;
    Ok(ThroughputPoint {
        xi,
        delta_psi: scenario.beamwidth(),
        p_d,
        beta,
        gamma: beta * (1.0 - xi) * isac.data_rate_bps,
    })
}

/// Scenario at duty cycle `xi` with the beamwidth re-derived from timing.
pub fn at_duty_cycle(scenario: &Scenario, xi: f64) -> Result<Scenario> {
    scenario.isac_or_err()?;
    scenario.with(|p| {
        p.radar.beamwidth_rad = None;
        if let Some(isac) = p.isac.as_mut() {
            isac.duty_cycle = xi;
        }
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DutySweep {
    pub points: Vec<ThroughputPoint>,
    /// Index of the first point attaining the largest `γ`.
    pub argmax: usize,
}

impl DutySweep {
    pub fn best(&self) -> &ThroughputPoint {
        &self.points[self.argmax]
    }
}

/// Evaluates [`network_throughput`] on every duty cycle of `xi_grid`, in
/// grid order. Ties for the maximum go to the smallest index.
pub fn sweep_duty_cycle(
    scenario: &Scenario,
    xi_grid: &[f64],
    opts: &QuadratureOptions,
) -> Result<DutySweep> {
    if xi_grid.is_empty() {
        return Err(Error::Configuration("duty-cycle grid is empty".into()));
    }
    let points = xi_grid
        .par_iter()
        .map(|&xi| network_throughput(&at_duty_cycle(scenario, xi)?, opts))
        .collect::<Result<Vec<_>>>()?;
    let argmax = first_argmax(points.iter().map(|p| p.gamma));
    Ok(DutySweep { points, argmax })
}

fn first_argmax(values: impl Iterator<Item = f64>) -> usize {
    let mut best = 0;
    let mut best_value = f64::NEG_INFINITY;
    for (i, v) in values.enumerate() {
        if v > best_value {
            best = i;
            best_value = v;
        }
    }
    best
}

/// `points` duty cycles evenly spaced on `[from, to]`.
pub fn duty_grid(from: f64, to: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![from],
        n => (0..n)
            .map(|i| {
                if i == n - 1 {
                    to
                } else {
                    from + (to - from) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}
