//! Clutter return in a resolution cell as a compound Poisson sum.
//!
//! The number of scatterers in the cell is Poisson with mean
//! `λ = ρ_c·A_r`; each scatterer returns `P0·g·σ_c·r_c^(-2α)` with `g`
//! exponential. All scatterers share the cell range `r_c`, so the return is
//! a Poisson number of i.i.d. exponentials with mean
//! `s = P0·σ_c·r_c^(-2α)·g_avg`, and its CF is
//! `exp(-λ·z/(z - 1))` with `z = jωs`.
//!
//! Writing the density through the surface clutter coefficient
//! `σ_o = ρ_c·σ_c` leaves `σ_c` in the fraction's denominator; both
//! parameterizations collapse to the same `(λ, s)` here.

use num_complex::Complex64;
use statrs::function::gamma::gamma_lr;

use crate::error::{non_negative, positive, Error, Result};
use crate::inversion::CfHandle;
use crate::scenario::Scenario;

/// Default term cap for [`clutter_cdf_series`].
pub const SERIES_TERM_CAP: usize = 10_000;

/// Canonical `(λ, s)` description of the clutter return distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompoundClutterSpec {
    /// Expected scatterer count in the cell.
    pub lambda: f64,
    /// Mean return power of one scatterer, W.
    pub mark_scale: f64,
    /// Radar constant `P_tx·G²`, W, when built from a scenario.
    pub p0: Option<f64>,
}

impl CompoundClutterSpec {
    pub fn new(lambda: f64, mark_scale: f64) -> Result<Self> {
        non_negative("lambda", lambda)?;
        if lambda > 0.0 {
            positive("mark_scale", mark_scale)?;
        } else {
            non_negative("mark_scale", mark_scale)?;
        }
        Ok(Self {
            lambda,
            mark_scale,
            p0: None,
        })
    }

    /// Builds the spec from the surface clutter coefficient `σ_o`.
    ///
    /// `λ = σ_o·A_r/σ_c`, `s = P0·σ_c·r_c^(-2α)·g_avg`.
    pub fn from_surface_coefficient(
        sigma_o: f64,
        rcs_m2: f64,
        fading_mean: f64,
        range_m: f64,
        path_loss_exp: f64,
        cell_area: f64,
        p0: f64,
    ) -> Result<Self> {
        non_negative("sigma_o", sigma_o)?;
        positive("sigma_c", rcs_m2)?;
        positive("g_c_avg", fading_mean)?;
        positive("r_c", range_m)?;
        non_negative("cell_area", cell_area)?;
        non_negative("p0", p0)?;
        let lambda = sigma_o * cell_area / rcs_m2;
        let mark_scale = p0 * rcs_m2 * range_m.powf(-2.0 * path_loss_exp) * fading_mean;
        if lambda > 0.0 && mark_scale <= 0.0 {
            // P_tx = 0: scatterers are present but return nothing
            return Ok(Self {
                lambda: 0.0,
                mark_scale,
                p0: Some(p0),
            });
        }
        Ok(Self {
            lambda,
            mark_scale,
            p0: Some(p0),
        })
    }

    /// Builds the spec from the scatterer density `ρ_c`.
    #[allow(clippy::too_many_arguments)]
    pub fn from_density(
        density_per_m2: f64,
        rcs_m2: f64,
        fading_mean: f64,
        range_m: f64,
        path_loss_exp: f64,
        cell_area: f64,
        p0: f64,
    ) -> Result<Self> {
        non_negative("rho_c", density_per_m2)?;
        Self::from_surface_coefficient(
            density_per_m2 * rcs_m2,
            rcs_m2,
            fading_mean,
            range_m,
            path_loss_exp,
            cell_area,
            p0,
        )
    }

    /// Point mass of the return at exactly zero, `e^(-λ)`.
    pub fn atom(&self) -> f64 {
        (-self.lambda).exp()
    }

    pub fn mean(&self) -> f64 {
        clutter_mean(self)
    }

    pub fn variance(&self) -> f64 {
        2.0 * self.lambda * self.mark_scale * self.mark_scale
    }

    pub fn cf(&self, omega: f64) -> Complex64 {
        clutter_cf(self, omega)
    }

    /// Chernoff bound on `P(C ≥ x)`: `exp(-(√(x/s) - √λ)²)` for `x/s > λ`,
    /// otherwise the trivial bound 1.
    pub fn tail_bound(&self, x: f64) -> f64 {
        if self.lambda == 0.0 {
            return if x > 0.0 { 0.0 } else { 1.0 };
        }
        let y = x / self.mark_scale;
        if y <= self.lambda {
            return 1.0;
        }
        let gap = y.sqrt() - self.lambda.sqrt();
        (-gap * gap).exp()
    }

    /// Inversion handle with the atom at zero split off.
    pub fn handle(&self) -> CfHandle<impl Fn(f64) -> Complex64 + Sync + '_> {
        let scale = if self.lambda > 0.0 {
            self.mark_scale
        } else {
            1.0
        };
        CfHandle::new(move |w| clutter_cf(self, w), self.atom(), self.mean()).with_scale(scale)
    }
}

/// Clutter distribution of a validated scenario.
pub fn clutter_spec_from_scenario(scenario: &Scenario) -> Result<CompoundClutterSpec> {
    let clutter = scenario.clutter();
    CompoundClutterSpec::from_density(
        clutter.density_per_m2,
        clutter.rcs_m2,
        clutter.fading_mean,
        clutter.range_m,
        scenario.radar().path_loss_exp,
        scenario.cell_area(),
        scenario.radar_constant(),
    )
}

/// `φ(ω) = exp(-λ·z/(z - 1))`, `z = jωs`.
pub fn clutter_cf(spec: &CompoundClutterSpec, omega: f64) -> Complex64 {
    if spec.lambda == 0.0 {
        return Complex64::new(1.0, 0.0);
    }
    let z = Complex64::new(0.0, omega * spec.mark_scale);
    (-spec.lambda * z / (z - 1.0)).exp()
}

pub fn clutter_mean(spec: &CompoundClutterSpec) -> f64 {
    spec.lambda * spec.mark_scale
}

/// CDF of the clutter return by direct summation over the scatterer count:
/// `F(x) = e^(-λ)·[1 + Σ_{n≥1} λⁿ/n!·P(n, x/s)]` for `x ≥ 0`, with `P`
/// the regularized lower incomplete gamma function.
///
/// The sum stops at the first `N` whose Poisson tail `P(K > N)` is below
/// `tol`, so the absolute error is at most `tol`.
pub fn clutter_cdf_series(spec: &CompoundClutterSpec, x: f64, tol: f64) -> Result<f64> {
    clutter_cdf_series_capped(spec, x, tol, SERIES_TERM_CAP)
}

pub fn clutter_cdf_series_capped(
    spec: &CompoundClutterSpec,
    x: f64,
    tol: f64,
    cap: usize,
) -> Result<f64> {
    positive("tol", tol)?;
    if x < 0.0 {
        return Ok(0.0);
    }
    let lambda = spec.lambda;
    if lambda == 0.0 {
        return Ok(1.0);
    }
    let y = x / spec.mark_scale;
    let ln_lambda = lambda.ln();
    // ln(λⁿ/n!) accumulated alongside the Poisson tail P(K > n) = P(n+1, λ)
    let mut ln_weight = 0.0;
    let mut total = (-lambda).exp();
    let mut n = 0usize;
    loop {
        if gamma_lr((n + 1) as f64, lambda) < tol {
            break;
        }
        n += 1;
        if n > cap {
            return Err(Error::OracleInfeasible { lambda, tol, cap });
        }
        ln_weight += ln_lambda - (n as f64).ln();
        if y > 0.0 {
            total += (ln_weight - lambda).exp() * gamma_lr(n as f64, y);
        }
    }
    Ok(total.clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::ScenarioParams;
    use approx::assert_relative_eq;

    fn unit(lambda: f64) -> CompoundClutterSpec {
        CompoundClutterSpec::new(lambda, 1.0).unwrap()
    }

    fn table_scenario(alpha: f64) -> Scenario {
        let mut p = ScenarioParams::default();
        p.radar.beamwidth_rad = Some(0.0174533);
        p.radar.path_loss_exp = alpha;
        Scenario::new(p).unwrap()
    }

    #[test]
    fn tail_bound_dominates_series() {
        for lambda in [0.1, 1.0, 7.5] {
            let spec = unit(lambda);
            for x in [0.5, 2.0, 10.0, 30.0, 60.0] {
                let tail = 1.0 - clutter_cdf_series(&spec, x, 1e-15).unwrap();
                assert!(tail <= spec.tail_bound(x) + 1e-14, "λ={lambda} x={x}");
            }
        }
        assert_eq!(unit(1.0).tail_bound(0.5), 1.0);
        assert!(unit(1.0).tail_bound(1e4) < 1e-300);
    }

    #[test]
    fn spec_from_table_defaults() {
        let spec = clutter_spec_from_scenario(&table_scenario(2.0)).unwrap();
        assert_relative_eq!(spec.lambda, 1.3080919268, max_relative = 1e-9);
        assert_relative_eq!(spec.mark_scale, 3.2828035e-2, max_relative = 1e-7);
        let spec4 = clutter_spec_from_scenario(&table_scenario(4.0)).unwrap();
        assert_relative_eq!(spec4.mark_scale, 3.2828035e-6, max_relative = 1e-7);
        assert_relative_eq!(clutter_mean(&spec), 4.2942e-2, max_relative = 1e-4);

        let empty = table_scenario(2.0)
            .with(|p| p.clutter.density_per_m2 = 0.0)
            .unwrap();
        assert_eq!(clutter_spec_from_scenario(&empty).unwrap().lambda, 0.0);
    }

    #[test]
    fn density_and_surface_coefficient_agree_bitwise() {
        for (rho, sigma) in [(1.0, 0.1), (0.3, 0.1), (7.25, 0.013), (1e-3, 2.5)] {
            let a =
                CompoundClutterSpec::from_density(rho, sigma, 1.0, 10.0, 2.0, 1.3, 3282.8).unwrap();
            let b = CompoundClutterSpec::from_surface_coefficient(
                rho * sigma,
                sigma,
                1.0,
                10.0,
                2.0,
                1.3,
                3282.8,
            )
            .unwrap();
            assert_eq!(a.lambda.to_bits(), b.lambda.to_bits());
            assert_eq!(a.mark_scale.to_bits(), b.mark_scale.to_bits());
        }
    }

    #[test]
    fn cf_examples() {
        assert_eq!(clutter_cf(&unit(1.0), 0.0), Complex64::new(1.0, 0.0));
        assert_eq!(clutter_cf(&unit(0.0), 3.7), Complex64::new(1.0, 0.0));
        let v = clutter_cf(&unit(1.0), 1.0);
        assert!((v.re - 0.532280730).abs() < 1e-8);
        assert!((v.im - 0.290786288).abs() < 1e-8);
    }

    #[test]
    fn cf_symmetry_bound_and_atom_limit() {
        let spec = CompoundClutterSpec::new(2.3, 0.7).unwrap();
        for k in -200..=200 {
            let w = k as f64 * 0.173;
            let v = spec.cf(w);
            assert!(v.norm() <= 1.0 + 1e-15);
            let m = spec.cf(-w);
            assert_eq!(v.re, m.re);
            assert_eq!(v.im, -m.im);
        }
        let far = spec.cf(1e9 / spec.mark_scale);
        assert!((far - Complex64::new(spec.atom(), 0.0)).norm() < 1e-8);
    }

    #[test]
    fn cf_moments_by_finite_differences() {
        for (lambda, s) in [(0.1, 1.0), (1.0, 1.0), (7.5, 0.02), (1.308, 3.28e-2)] {
            let spec = CompoundClutterSpec::new(lambda, s).unwrap();
            let h = 1e-6 / s;
            let d1 = (spec.cf(h) - spec.cf(-h)) / (2.0 * h);
            assert_relative_eq!(d1.im, clutter_mean(&spec), max_relative = 1e-6);

            // second moment: Richardson on a coarser step, the 1e-6 step
            // loses too many digits to cancellation in 2 - φ(h) - φ(-h)
            let second = |h: f64| -(spec.cf(h) + spec.cf(-h) - 2.0).re / (h * h);
            let h = 1e-3 / s;
            let m2 = (4.0 * second(h / 2.0) - second(h)) / 3.0;
            let expected = 2.0 * lambda * s * s + (lambda * s).powi(2);
            assert_relative_eq!(m2, expected, max_relative = 1e-5);
        }
    }

    #[test]
    fn mean_examples() {
        assert_eq!(clutter_mean(&unit(1.0)), 1.0);
        assert_eq!(
            clutter_mean(&CompoundClutterSpec::new(0.0, 5.0).unwrap()),
            0.0
        );
    }

    #[test]
    fn series_examples() {
        let spec = unit(1.0);
        assert_eq!(clutter_cdf_series(&spec, -0.5, 1e-8).unwrap(), 0.0);
        assert_relative_eq!(
            clutter_cdf_series(&spec, 0.0, 1e-12).unwrap(),
            (-1.0f64).exp(),
            max_relative = 1e-14
        );
        // frozen from a 30-digit evaluation of the same series
        let f = clutter_cdf_series(&spec, 1.0, 1e-8).unwrap();
        assert!((f - 0.654254161276835).abs() < 1e-8);
    }

    #[test]
    fn series_against_frozen_values() {
        let cases = [
            (0.1, 0.5, 0.940850272418077),
            (0.1, 3.0, 0.994527773202029),
            (1.0, 0.5, 0.530130362197095),
            (1.0, 3.0, 0.906136886583505),
            (7.5, 0.5, 0.00429657393862022),
            (7.5, 3.0, 0.103878188487342),
            (7.5, 46.22983346207417, 0.999999997095712),
        ];
        for (lambda, x, expected) in cases {
            let f = clutter_cdf_series(&unit(lambda), x, 1e-12).unwrap();
            assert!(
                (f - expected).abs() < 1e-11,
                "λ={lambda} x={x}: {f} vs {expected}"
            );
        }
    }

    #[test]
    fn series_is_monotone_and_reaches_one() {
        for lambda in [0.1, 1.0, 7.5, 40.0] {
            let spec = unit(lambda);
            let top = lambda + 40.0 * (2.0 * lambda).sqrt();
            let mut prev = 0.0;
            for i in 0..=200 {
                let x = top * i as f64 / 200.0;
                let f = clutter_cdf_series(&spec, x, 1e-12).unwrap();
                assert!(f >= prev - 1e-15);
                prev = f;
            }
            assert!((prev - 1.0).abs() < 1e-6, "λ={lambda}: {prev}");
        }
    }

    #[test]
    fn series_refuses_large_lambda() {
        let spec = unit(5e4);
        assert!(matches!(
            clutter_cdf_series(&spec, 1.0, 1e-10),
            Err(Error::OracleInfeasible { .. })
        ));
        assert!(clutter_cdf_series_capped(&unit(50.0), 1.0, 1e-10, 20).is_err());
    }
}
