//! Analytic metrics against Monte Carlo estimates on an (α, P_tx) grid.

use std::fmt::Write as _;

use isac_core::detection::evaluate;
use isac_core::{
    estimate_pd_mc, estimate_pfa_mc, McEstimate, McOptions, QuadratureOptions, Scenario,
};

use crate::sweep::fmt_num;
use crate::CliError;

pub const DEFAULT_ALPHAS: [f64; 3] = [2.0, 3.0, 4.0];
pub const DEFAULT_PTX_W: [f64; 4] = [0.25, 0.5, 0.75, 1.0];

#[derive(Debug, Clone, PartialEq)]
pub struct ValidatePoint {
    pub alpha: f64,
    pub ptx_w: f64,
    pub pfa: f64,
    pub pd: f64,
    pub pfa_mc: McEstimate,
    pub pd_mc: McEstimate,
}

impl ValidatePoint {
    pub fn pfa_ok(&self) -> bool {
        self.pfa_mc.contains(self.pfa)
    }

    pub fn pd_ok(&self) -> bool {
        self.pd_mc.contains(self.pd)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub points: Vec<ValidatePoint>,
}

/// Points that must pass per metric: all but one in twelve.
pub fn required_passes(n: usize) -> usize {
    n - n / 12
}

impl ValidationReport {
    pub fn pfa_passes(&self) -> usize {
        self.points.iter().filter(|p| p.pfa_ok()).count()
    }

    pub fn pd_passes(&self) -> usize {
        self.points.iter().filter(|p| p.pd_ok()).count()
    }

    pub fn passed(&self) -> bool {
        let need = required_passes(self.points.len());
        self.pfa_passes() >= need && self.pd_passes() >= need
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:>15} {:>15} {:>6} {:>15} {:>15} {:>15} {:>15}  result",
            "alpha", "ptx_w", "metric", "analytic", "mc", "ci_low", "ci_high"
        );
        for p in &self.points {
            for (name, analytic, mc, ok) in [
                ("pfa", p.pfa, &p.pfa_mc, p.pfa_ok()),
                ("pd", p.pd, &p.pd_mc, p.pd_ok()),
            ] {
                let _ = writeln!(
                    out,
                    "{:>15} {:>15} {:>6} {:>15} {:>15} {:>15} {:>15}  {}",
                    fmt_num(p.alpha),
                    fmt_num(p.ptx_w),
                    name,
                    fmt_num(analytic),
                    fmt_num(mc.estimate),
                    fmt_num(mc.ci_low),
                    fmt_num(mc.ci_high),
                    if ok { "PASS" } else { "FAIL" }
                );
            }
        }
        let n = self.points.len();
        let _ = writeln!(
            out,
            "pfa inside interval: {}/{n}, pd inside interval: {}/{n}, required: {}",
            self.pfa_passes(),
            self.pd_passes(),
            required_passes(n)
        );
        let _ = writeln!(
            out,
            "calibration {}",
            if self.passed() { "PASS" } else { "FAIL" }
        );
        out
    }
}

pub fn run_validation(
    base: &Scenario,
    alphas: &[f64],
    ptx_w: &[f64],
    mc: &McOptions,
    opts: &QuadratureOptions,
) -> Result<ValidationReport, CliError> {
    if alphas.is_empty() || ptx_w.is_empty() {
        return Err(CliError::Usage("validation grid is empty".into()));
    }
    let mut points = Vec::with_capacity(alphas.len() * ptx_w.len());
    for &alpha in alphas {
        for &ptx in ptx_w {
            let s = base
                .with(|p| {
                    p.radar.path_loss_exp = alpha;
                    p.radar.tx_power_w = ptx;
                })
                .map_err(CliError::Core)?;
            let m = evaluate(&s, opts).map_err(CliError::Core)?;
            points.push(ValidatePoint {
                alpha,
                ptx_w: ptx,
                pfa: m.p_fa,
                pd: m.p_d,
                pfa_mc: estimate_pfa_mc(&s, mc).map_err(CliError::Core)?,
                pd_mc: estimate_pd_mc(&s, mc).map_err(CliError::Core)?,
            });
        }
    }
    Ok(ValidationReport { points })
}
