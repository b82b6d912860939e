//! Monte Carlo estimates of `P_fa` and `P_d`.
//!
//! Trial `i` of a run draws from its own ChaCha8 stream: the generator is
//! seeded with `seed` and switched to stream `i`. Estimates are therefore
//! identical for a given `(seed, trials, mode)` no matter how trials are
//! scheduled across threads.
//!
//! Noise is the deterministic floor `N_p`. In [`SamplingMode::CellLumped`]
//! every scatterer sits at the cell range, which is exactly the analytic
//! model; [`SamplingMode::PositionResolved`] spreads scatterers over the
//! cell's annular sector to measure that approximation.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, Poisson};
use rayon::prelude::*;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::clutter::{clutter_spec_from_scenario, CompoundClutterSpec};
use crate::error::{Error, Result};
use crate::scenario::{range_resolution, Scenario};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SamplingMode {
    #[default]
    CellLumped,
    PositionResolved,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TargetModel {
    /// Target return fixed at its mean `S0`.
    #[default]
    MeanS0,
    /// Exponentially distributed RCS with mean `σ_t_avg`.
    Swerling1,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McOptions {
    pub trials: u64,
    pub seed: u64,
    pub mode: SamplingMode,
    pub target_model: TargetModel,
    /// Confidence level of the Wilson interval.
    pub confidence: f64,
}

impl Default for McOptions {
    fn default() -> Self {
        Self {
            trials: 1_000_000,
            seed: 42,
            mode: SamplingMode::CellLumped,
            target_model: TargetModel::MeanS0,
            confidence: 0.99,
        }
    }
}

impl McOptions {
    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidParameter {
                name: "trials",
                value: 0.0,
                reason: "need at least one trial",
            });
        }
        if !(self.confidence > 0.0 && self.confidence < 1.0) {
            return Err(Error::InvalidParameter {
                name: "confidence",
                value: self.confidence,
                reason: "must lie strictly between 0 and 1",
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub successes: u64,
    pub trials: u64,
    pub seed: u64,
}

impl McEstimate {
    pub fn contains(&self, p: f64) -> bool {
        self.ci_low <= p && p <= self.ci_high
    }

    pub fn half_width(&self) -> f64 {
        0.5 * (self.ci_high - self.ci_low)
    }
}

/// Wilson score interval for `successes` out of `trials`.
pub fn wilson_interval(successes: u64, trials: u64, confidence: f64) -> (f64, f64) {
    let n = trials as f64;
    let p = successes as f64 / n;
    let z = Normal::standard().inverse_cdf(0.5 + 0.5 * confidence);
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    let lo = (center - half).clamp(0.0, 1.0).min(p);
    let hi = (center + half).clamp(0.0, 1.0).max(p);
    (lo, hi)
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// One draw of the cell-lumped clutter return: a Poisson(λ) number of
/// exponential returns with mean `s`.
pub fn sample_clutter_return<R: Rng + ?Sized>(spec: &CompoundClutterSpec, rng: &mut R) -> f64 {
    ClutterSampler::lumped(spec).sample(rng)
}

/// Draws clutter returns for one scenario.
#[derive(Debug, Clone)]
pub struct ClutterSampler {
    spec: CompoundClutterSpec,
    count: Option<Poisson<f64>>,
    /// `(r_near, r_far, r_c, 2α)` for position-resolved sampling.
    annulus: Option<(f64, f64, f64, f64)>,
}

impl ClutterSampler {
    pub fn lumped(spec: &CompoundClutterSpec) -> Self {
        Self {
            spec: *spec,
            count: poisson(spec.lambda),
            annulus: None,
        }
    }

    pub fn for_scenario(scenario: &Scenario, mode: SamplingMode) -> Result<Self> {
        let spec = clutter_spec_from_scenario(scenario)?;
        let mut sampler = Self::lumped(&spec);
        if mode == SamplingMode::PositionResolved {
            let r_c = scenario.clutter().range_m;
            let half_depth = 0.5 * range_resolution(scenario.radar().bandwidth_hz);
            if r_c <= half_depth {
                return Err(Error::InvalidGeometry { r_c, half_depth });
            }
            sampler.annulus = Some((
                r_c - half_depth,
                r_c + half_depth,
                r_c,
                2.0 * scenario.radar().path_loss_exp,
            ));
        }
        Ok(sampler)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let Some(count) = &self.count else {
            return 0.0;
        };
        let k = count.sample(rng) as u64;
        let mut total = 0.0;
        for _ in 0..k {
            let fading: f64 = Exp1.sample(rng);
            let mut power = self.spec.mark_scale * fading;
            if let Some((near, far, r_c, exponent)) = self.annulus {
                // uniform over the sector area: density of r grows like r
                let u: f64 = rng.random();
                let r = (near * near + u * (far * far - near * near)).sqrt();
                power *= (r / r_c).powf(-exponent);
            }
            total += power;
        }
        total
    }
}

fn poisson(lambda: f64) -> Option<Poisson<f64>> {
    if lambda > 0.0 {
        Poisson::new(lambda).ok()
    } else {
        None
    }
}

fn count_hits(opts: &McOptions, hit: impl Fn(&mut ChaCha8Rng) -> bool + Sync) -> McEstimate {
    let successes: u64 = (0..opts.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(opts.seed, trial);
            u64::from(hit(&mut rng))
        })
        .sum();
    let (ci_low, ci_high) = wilson_interval(successes, opts.trials, opts.confidence);
    McEstimate {
        estimate: successes as f64 / opts.trials as f64,
        ci_low,
        ci_high,
        successes,
        trials: opts.trials,
        seed: opts.seed,
    }
}

/// Fraction of trials with `C + N_p ≥ η`.
pub fn estimate_pfa_mc(scenario: &Scenario, opts: &McOptions) -> Result<McEstimate> {
    opts.validate()?;
    let sampler = ClutterSampler::for_scenario(scenario, opts.mode)?;
    let noise = scenario.noise_power();
    let eta = scenario.radar().threshold_w;
    Ok(count_hits(opts, |rng| sampler.sample(rng) + noise >= eta))
}

/// Fraction of trials with `S + C + N_p ≥ η`.
///
/// The clutter draw comes first in each trial's stream, so with a zero
/// target return this reproduces [`estimate_pfa_mc`] exactly.
pub fn estimate_pd_mc(scenario: &Scenario, opts: &McOptions) -> Result<McEstimate> {
    opts.validate()?;
    let sampler = ClutterSampler::for_scenario(scenario, opts.mode)?;
    let noise = scenario.noise_power();
    let eta = scenario.radar().threshold_w;
    let s0 = scenario.mean_signal_power();
    let model = opts.target_model;
    Ok(count_hits(opts, |rng| {
        let clutter = sampler.sample(rng);
        let signal = match model {
            TargetModel::MeanS0 => s0,
            TargetModel::Swerling1 => {
                let e: f64 = Exp1.sample(rng);
                s0 * e
            }
        };
        signal + clutter + noise >= eta
    }))
}

/// `|P_fa(position resolved) - P_fa(cell lumped)|` at matched seed and
/// trial count.
pub fn position_resolved_gap(scenario: &Scenario, opts: &McOptions) -> Result<f64> {
    let resolved = estimate_pfa_mc(
        scenario,
        &McOptions {
            mode: SamplingMode::PositionResolved,
            ..*opts
        },
    )?;
    let lumped = estimate_pfa_mc(
        scenario,
        &McOptions {
            mode: SamplingMode::CellLumped,
            ..*opts
        },
    )?;
    Ok((resolved.estimate - lumped.estimate).abs())
}
