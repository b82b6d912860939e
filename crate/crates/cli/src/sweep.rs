//! One-parameter sweeps written as CSV.

use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;

use isac_core::detection::evaluate;
use isac_core::throughput::{at_duty_cycle, duty_grid, throughput_at};
use isac_core::{threshold_for_pfa, QuadratureOptions, Scenario};

use crate::CliError;

pub const CSV_HEADER: &str = "param,value,alpha,pfa,pd,beta,gamma_bps";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    /// Transmit power, W.
    Ptx,
    /// Bandwidth, Hz.
    Bw,
    /// Radar duty cycle; the beamwidth follows from the ISAC timing.
    Duty,
    /// Surface clutter coefficient `σ_o`, varied through `ρ_c` at fixed `σ_c`.
    Sigma0,
    /// Mean target RCS, m².
    RcsT,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::Ptx => "ptx",
            SweepParam::Bw => "bw",
            SweepParam::Duty => "duty",
            SweepParam::Sigma0 => "sigma0",
            SweepParam::RcsT => "rcs_t",
        }
    }

    /// Scenario with the swept parameter set to `value`.
    pub fn apply(self, scenario: &Scenario, value: f64) -> isac_core::Result<Scenario> {
        match self {
            SweepParam::Ptx => scenario.with(|p| p.radar.tx_power_w = value),
            SweepParam::Bw => scenario.with(|p| p.radar.bandwidth_hz = value),
            SweepParam::Duty => at_duty_cycle(scenario, value),
            SweepParam::Sigma0 => {
                scenario.with(|p| p.clutter.density_per_m2 = value / p.clutter.rcs_m2)
            }
            SweepParam::RcsT => scenario.with(|p| p.target.mean_rcs_m2 = value),
        }
    }
}

impl FromStr for SweepParam {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "ptx" => SweepParam::Ptx,
            "bw" => SweepParam::Bw,
            "duty" => SweepParam::Duty,
            "sigma0" => SweepParam::Sigma0,
            "rcs_t" => SweepParam::RcsT,
            other => {
                return Err(format!(
                    "unknown sweep parameter `{other}` (expected ptx, bw, duty, sigma0 or rcs_t)"
                ))
            }
        })
    }
}

/// How the threshold is chosen for each path-loss exponent.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum EtaMode {
    /// `η` from the config throughout.
    #[default]
    Fixed,
    /// `η` solved once per `α` so that the config scenario itself has
    /// `P_fa = target`, then held over the sweep. Without a target the
    /// attainable maximum `1 - e^(-λ)` is used, which puts `η` just above
    /// the reference noise floor.
    Resolve { target_pfa: Option<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRequest {
    pub param: SweepParam,
    pub from: f64,
    pub to: f64,
    pub points: usize,
    pub alphas: Vec<f64>,
    pub eta_mode: EtaMode,
}

impl SweepRequest {
    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.from.is_finite() && self.to.is_finite() && self.from < self.to) {
            return Err(CliError::Usage(format!(
                "sweep range needs from < to, got {} .. {}",
                self.from, self.to
            )));
        }
        if self.points < 2 {
            return Err(CliError::Usage("a sweep needs at least 2 points".into()));
        }
        if self.alphas.is_empty() {
            return Err(CliError::Usage("no path-loss exponents given".into()));
        }
        if let Some(a) = self.alphas.iter().find(|a| !(**a >= 1.0 && a.is_finite())) {
            return Err(CliError::Usage(format!(
                "path-loss exponent {a} is below 1"
            )));
        }
        if let EtaMode::Resolve {
            target_pfa: Some(t),
        } = self.eta_mode
        {
            if !(t > 0.0 && t < 1.0) {
                return Err(CliError::Usage(format!(
                    "reference false-alarm probability {t} is not in (0, 1)"
                )));
            }
        }
        Ok(())
    }

    /// Sweep values in ascending order, endpoints included exactly.
    pub fn grid(&self) -> Vec<f64> {
        duty_grid(self.from, self.to, self.points)
    }

    /// Path-loss exponents in ascending order.
    pub fn sorted_alphas(&self) -> Vec<f64> {
        let mut alphas = self.alphas.clone();
        alphas.sort_by(f64::total_cmp);
        alphas.dedup();
        alphas
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub alpha: f64,
    pub pfa: f64,
    pub pd: f64,
    pub beta: f64,
    pub gamma_bps: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub param: SweepParam,
    /// Outer order by `α`, inner by sweep value, both ascending.
    pub rows: Vec<SweepRow>,
}

/// Formats like `7.29966462e-1`: nine significant digits.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.8e}")
}

impl SweepTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * (self.rows.len() + 1));
        out.push_str(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                self.param.name(),
                fmt_num(r.value),
                fmt_num(r.alpha),
                fmt_num(r.pfa),
                fmt_num(r.pd),
                fmt_num(r.beta),
                fmt_num(r.gamma_bps),
            );
        }
        out
    }

    /// Largest-throughput row for each `α`.
    pub fn argmax_per_alpha(&self) -> Vec<&SweepRow> {
        let mut out: Vec<&SweepRow> = Vec::new();
        for r in &self.rows {
            match out.last_mut() {
                Some(best) if best.alpha == r.alpha => {
                    if r.gamma_bps > best.gamma_bps {
                        *best = r;
                    }
                }
                _ => out.push(r),
            }
        }
        out
    }
}

/// Threshold used for every point of the `α` curve.
pub fn threshold_for_alpha(
    base: &Scenario,
    alpha: f64,
    mode: EtaMode,
    opts: &QuadratureOptions,
) -> Result<f64, CliError> {
    match mode {
        EtaMode::Fixed => Ok(base.radar().threshold_w),
        EtaMode::Resolve { target_pfa } => {
            let reference = base
                .with(|p| p.radar.path_loss_exp = alpha)
                .map_err(CliError::Core)?;
            let target = match target_pfa {
                Some(t) => t,
                None => {
                    1.0 - isac_core::clutter_spec_from_scenario(&reference)
                        .map_err(CliError::Core)?
                        .atom()
                }
            };
            if target <= 0.0 {
                return Err(CliError::Usage(
                    "reference scenario has no clutter; there is no threshold to resolve".into(),
                ));
            }
            threshold_for_pfa(&reference, target, opts)
                .map(|sol| sol.threshold_w)
                .map_err(CliError::Core)
        }
    }
}

pub fn run_sweep(
    base: &Scenario,
    request: &SweepRequest,
    opts: &QuadratureOptions,
) -> Result<SweepTable, CliError> {
    request.validate()?;
    if base.isac().is_none() {
        return Err(CliError::Usage(
            "sweeps need the ISAC timing parameters".into(),
        ));
    }
    let grid = request.grid();
    let mut cases = Vec::new();
    for alpha in request.sorted_alphas() {
        let eta = threshold_for_alpha(base, alpha, request.eta_mode, opts)?;
        cases.extend(grid.iter().map(|&v| (alpha, eta, v)));
    }
    let param = request.param;
    let rows = cases
        .par_iter()
        .map(|&(alpha, eta, value)| {
            sweep_point(base, param, alpha, eta, value, opts).map_err(|source| {
                CliError::SweepPoint {
                    param: param.name(),
                    value,
                    alpha,
                    source,
                }
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SweepTable { param, rows })
}

fn sweep_point(
    base: &Scenario,
    param: SweepParam,
    alpha: f64,
    eta: f64,
    value: f64,
    opts: &QuadratureOptions,
) -> isac_core::Result<SweepRow> {
    let tuned = base.with(|p| {
        p.radar.path_loss_exp = alpha;
        p.radar.threshold_w = eta;
    })?;
    let s = param.apply(&tuned, value)?;
    let m = evaluate(&s, opts)?;
    let t = throughput_at(&s, m.p_d)?;
    Ok(SweepRow {
        value,
        alpha,
        pfa: m.p_fa,
        pd: m.p_d,
        beta: t.beta,
        gamma_bps: t.gamma,
    })
}
