//! CDF evaluation from a characteristic function by Gil-Pelaez inversion.
//!
//! A known point mass `a` at zero is split off analytically:
//!
//! ```text
//! F(x) = 1/2 + (a/2)·sign(x) - (1/π)·∫₀^∞ Im[(φ(ω) - a)·e^{-jωx}] / ω dω
//! ```
//!
//! so the remaining integrand decays as `1/ω²` whenever the continuous part
//! of `φ` decays as `1/ω`. The integral is taken in the dimensionless
//! variable `u = ω·scale`, panel by panel between consecutive half-periods
//! of `e^{-jωx}`, each panel by 15-point Gauss-Legendre on sub-intervals
//! that widen geometrically with `u`. Consecutive panels alternate in sign,
//! so the partial sums are averaged over the last panel once both the panel
//! magnitude and the tail bound are below `abs_tol/2`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

const GL_ORDER: usize = 15;
/// `|x|/scale` below this is treated as `x = 0⁺`.
const ZERO_ARGUMENT: f64 = 1e-12;
/// Sub-interval length floor and growth rate, in units of `u`.
const MIN_STEP: f64 = 0.1;
const STEP_GROWTH: f64 = 0.5;
/// The non-oscillatory tail bound is trusted only past this `u`.
const ASYMPTOTIC_U: f64 = 1.0;
const SMALL_U: f64 = 1e-8;

/// Tolerances and limits for [`cdf_from_cf`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOptions {
    /// Target absolute error on the CDF.
    pub abs_tol: f64,
    /// Maximum number of oscillation panels.
    pub panel_budget: usize,
    /// Integration never extends past `u = omega_max_factor / abs_tol`.
    pub omega_max_factor: f64,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-8,
            panel_budget: 100_000,
            omega_max_factor: 1e4,
        }
    }
}

impl QuadratureOptions {
    pub fn with_tol(abs_tol: f64) -> Self {
        Self {
            abs_tol,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.abs_tol.is_nan() || self.abs_tol <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "abs_tol",
                value: self.abs_tol,
                reason: "must be positive",
            });
        }
        if self.panel_budget == 0 {
            return Err(Error::InvalidParameter {
                name: "panel_budget",
                value: 0.0,
                reason: "must be at least 1",
            });
        }
        if self.omega_max_factor.is_nan() || self.omega_max_factor < 1.0 {
            return Err(Error::InvalidParameter {
                name: "omega_max_factor",
                value: self.omega_max_factor,
                reason: "must be at least 1",
            });
        }
        Ok(())
    }
}

/// A characteristic function together with what the inversion needs to
/// know about it.
///
/// The callable must be reentrant; inversions may run concurrently.
#[derive(Clone)]
pub struct CfHandle<F> {
    cf: F,
    atom_at_zero: f64,
    mean_hint: f64,
    scale: f64,
}

impl<F> CfHandle<F>
where
    F: Fn(f64) -> Complex64,
{
    /// `scale` defaults to `mean_hint` (or 1 when the mean is not positive).
    pub fn new(cf: F, atom_at_zero: f64, mean_hint: f64) -> Self {
        let scale = if mean_hint > 0.0 && mean_hint.is_finite() {
            mean_hint
        } else {
            1.0
        };
        Self {
            cf,
            atom_at_zero,
            mean_hint,
            scale,
        }
    }

    /// Sets the characteristic width of the variable, used for the change of
    /// variable `u = ω·scale`.
    pub fn with_scale(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }

    pub fn atom_at_zero(&self) -> f64 {
        self.atom_at_zero
    }

    pub fn mean_hint(&self) -> f64 {
        self.mean_hint
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn eval(&self, omega: f64) -> Complex64 {
        (self.cf)(omega)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.atom_at_zero) {
            return Err(Error::InvalidParameter {
                name: "atom_at_zero",
                value: self.atom_at_zero,
                reason: "must be a probability",
            });
        }
        if !(self.scale > 0.0 && self.scale.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "scale",
                value: self.scale,
                reason: "must be positive and finite",
            });
        }
        let at_origin = self.eval(0.0);
        if (at_origin - 1.0).norm() > 1e-12 {
            return Err(Error::InvalidParameter {
                name: "cf(0)",
                value: at_origin.re,
                reason: "characteristic function must equal 1 at the origin",
            });
        }
        Ok(())
    }
}

/// Full result of one inversion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CdfEvaluation {
    /// CDF clamped to `[0, 1]`.
    pub value: f64,
    /// Value before clamping.
    pub raw: f64,
    /// Distance moved by the clamp.
    pub clamp_distance: f64,
    /// Estimated absolute error of `raw`.
    pub error_bound: f64,
    /// Oscillation panels integrated.
    pub panels: usize,
}

impl CdfEvaluation {
    fn from_raw(raw: f64, error_bound: f64, panels: usize) -> Self {
        let value = raw.clamp(0.0, 1.0);
        Self {
            value,
            raw,
            clamp_distance: (value - raw).abs(),
            error_bound,
            panels,
        }
    }
}

/// `F(x)` for the distribution behind `handle`, clamped to `[0, 1]`.
pub fn cdf_from_cf<F>(handle: &CfHandle<F>, x: f64, opts: &QuadratureOptions) -> Result<f64>
where
    F: Fn(f64) -> Complex64,
{
    cdf_from_cf_detailed(handle, x, opts).map(|e| e.value)
}

pub fn cdf_from_cf_detailed<F>(
    handle: &CfHandle<F>,
    x: f64,
    opts: &QuadratureOptions,
) -> Result<CdfEvaluation>
where
    F: Fn(f64) -> Complex64,
{
    handle.validate()?;
    opts.validate()?;
    if !x.is_finite() {
        return Err(Error::InvalidParameter {
            name: "x",
            value: x,
            reason: "must be finite",
        });
    }

    let atom = handle.atom_at_zero;
    let scale = handle.scale;
    let xs = x / scale;
    if xs.abs() < ZERO_ARGUMENT {
        return Ok(CdfEvaluation::from_raw(atom, 0.0, 0));
    }

    let remainder = |u: f64| handle.eval(u / scale) - atom;
    let mean_s = handle.mean_hint / scale;
    let integrand = |u: f64| {
        if u < SMALL_U {
            mean_s - xs * (1.0 - atom)
        } else {
            (remainder(u) * Complex64::cis(-u * xs)).im / u
        }
    };
    // ∫_U^∞ |R(u)|/u du with |R| ~ C/u, and the same integral with the
    // oscillation integrated by parts once
    let tail_bound = |u: f64| {
        let r = remainder(u).norm();
        let oscillating = 2.0 * r / (u * xs.abs());
        let plain = if u >= ASYMPTOTIC_U { r } else { f64::INFINITY };
        oscillating.min(plain) / PI
    };

    let half_tol = opts.abs_tol / 2.0;
    let period = PI / xs.abs();
    let u_ceiling = opts.omega_max_factor / opts.abs_tol;
    let rule = gauss_legendre();

    let mut total = 0.0;
    let mut last_panel = 0.0;
    let mut panels = 0usize;
    while panels < opts.panel_budget {
        let start = panels as f64 * period;
        let end = start + period;
        let mut panel = 0.0;
        let mut lo = start;
        let mut early_tail = None;
        while lo < end {
            let step = MIN_STEP.max(STEP_GROWTH * lo).min(end - lo);
            let hi = lo + step;
            panel += rule.integrate(lo, hi, integrand);
            lo = hi;
            // inside a long first panel the integrand may die out long
            // before the oscillation matters
            if lo < end && lo >= ASYMPTOTIC_U {
                let r = remainder(lo).norm() / PI;
                if r < half_tol * 1e-2 {
                    early_tail = Some(r);
                    break;
                }
            }
        }
        panels += 1;
        total += panel;
        last_panel = panel;

        if let Some(r) = early_tail {
            let raw = 0.5 + 0.5 * atom * x.signum() - total / PI;
            return Ok(CdfEvaluation::from_raw(raw, r, panels));
        }
        let tail = tail_bound(end);
        if (panel / PI).abs() < half_tol && tail < half_tol {
            let integral = total - 0.5 * last_panel;
            let raw = 0.5 + 0.5 * atom * x.signum() - integral / PI;
            let bound = 0.5 * (last_panel / PI).abs() + tail;
            return Ok(CdfEvaluation::from_raw(raw, bound, panels));
        }
        if end >= u_ceiling {
            break;
        }
    }

    let integral = total - 0.5 * last_panel;
    let raw = 0.5 + 0.5 * atom * x.signum() - integral / PI;
    let bound = 0.5 * (last_panel / PI).abs() + tail_bound(panels as f64 * period);
    Err(Error::ConvergenceFailure {
        estimate: raw.clamp(0.0, 1.0),
        error_bound: bound,
        panels,
    })
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub(crate) struct GaussLegendre {
    nodes: [f64; GL_ORDER],
    weights: [f64; GL_ORDER],
}

impl GaussLegendre {
    fn integrate(&self, a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }
}

pub(crate) fn gauss_legendre() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GL_ORDER;
        let mut nodes = [0.0; GL_ORDER];
        let mut weights = [0.0; GL_ORDER];
        for i in 0..n {
            // Newton on P_n from the Chebyshev-like initial guess
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        GaussLegendre { nodes, weights }
    })
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}
