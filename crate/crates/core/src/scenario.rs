//! Radar, clutter, target and ISAC timing parameters, and the quantities
//! derived from them (noise floor, antenna gain, resolution cell, mean
//! target return, beamwidth).
//!
//! Ranges enter the power law `r^(-2α)` as plain numbers of meters; every
//! other dimensional constant is folded into the radar constant
//! `P0 = P_tx·G²`.

use std::f64::consts::PI;

use crate::error::{non_negative, positive, Error, Result};

/// Boltzmann constant, J/K (exact SI value).
pub const BOLTZMANN: f64 = 1.380649e-23;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 2.99792458e8;

/// Radar front-end parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct RadarParams {
    /// Carrier frequency, Hz. Carried for reference; it enters no formula.
    pub carrier_hz: f64,
    pub bandwidth_hz: f64,
    pub tx_power_w: f64,
    /// Gain constant `G0` in `G = G0/Δψ`.
    pub gain_constant: f64,
    pub system_temp_k: f64,
    /// Detection threshold `η`, W.
    pub threshold_w: f64,
    /// Path-loss exponent `α`; two-way returns scale as `r^(-2α)`.
    pub path_loss_exp: f64,
    /// Beamwidth in radians. When set it takes precedence over the value
    /// implied by the ISAC duty cycle.
    pub beamwidth_rad: Option<f64>,
}

impl Default for RadarParams {
    fn default() -> Self {
        Self {
            carrier_hz: 60e9,
            bandwidth_hz: 20e6,
            tx_power_w: 1.0,
            gain_constant: 1.0,
            system_temp_k: 300.0,
            threshold_w: 1e-13,
            path_loss_exp: 2.0,
            beamwidth_rad: None,
        }
    }
}

impl RadarParams {
    pub fn validate(&self) -> Result<()> {
        non_negative("f_c", self.carrier_hz)?;
        positive("bw", self.bandwidth_hz)?;
        non_negative("p_tx", self.tx_power_w)?;
        positive("g0", self.gain_constant)?;
        non_negative("t_s", self.system_temp_k)?;
        positive("eta", self.threshold_w)?;
        if !(self.path_loss_exp >= 1.0 && self.path_loss_exp.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "alpha",
                value: self.path_loss_exp,
                reason: "path-loss exponent must be at least 1",
            });
        }
        if let Some(dpsi) = self.beamwidth_rad {
            check_beamwidth(dpsi)?;
        }
        Ok(())
    }
}

fn check_beamwidth(dpsi: f64) -> Result<()> {
    if dpsi > 0.0 && dpsi <= 2.0 * PI {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "delta_psi",
            value: dpsi,
            reason: "beamwidth must lie in (0, 2π]",
        })
    }
}

/// Discrete clutter in the resolution cell of the target.
#[derive(Debug, Clone, PartialEq)]
pub struct ClutterParams {
    /// Scatterer density `ρ_c`, m⁻².
    pub density_per_m2: f64,
    /// Per-scatterer RCS `σ_c`, m².
    pub rcs_m2: f64,
    /// Mean of the exponential fading coefficient.
    pub fading_mean: f64,
    /// Clutter cell range `r_c`, m.
    pub range_m: f64,
}

impl Default for ClutterParams {
    fn default() -> Self {
        Self {
            density_per_m2: 1.0,
            rcs_m2: 0.1,
            fading_mean: 1.0,
            range_m: 10.0,
        }
    }
}

impl ClutterParams {
    /// Surface clutter coefficient `σ_o = ρ_c·σ_c`.
    pub fn surface_coefficient(&self) -> f64 {
        self.density_per_m2 * self.rcs_m2
    }

    pub fn validate(&self) -> Result<()> {
        non_negative("rho_c", self.density_per_m2)?;
        positive("sigma_c", self.rcs_m2)?;
        positive("g_c_avg", self.fading_mean)?;
        positive("r_c", self.range_m)?;
        Ok(())
    }
}

/// Swerling-1 target and mobile-user population.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetParams {
    /// Mean target RCS, m².
    pub mean_rcs_m2: f64,
    pub range_m: f64,
    /// Spatial density of mobile targets `ρ_t`, m⁻².
    pub density_per_m2: f64,
}

impl Default for TargetParams {
    fn default() -> Self {
        Self {
            mean_rcs_m2: 10.0,
            range_m: 10.0,
            density_per_m2: 1e-3,
        }
    }
}

impl TargetParams {
    pub fn validate(&self) -> Result<()> {
        non_negative("sigma_t_avg", self.mean_rcs_m2)?;
        positive("r_t", self.range_m)?;
        non_negative("rho_t", self.density_per_m2)?;
        Ok(())
    }
}

/// Time-multiplexing of radar search and communication within one ISAC cycle.
///
/// The defaults for everything except the duty cycle are not part of the
/// published parameter table; they put the beamwidth near 1° at ξ = 0.9.
#[derive(Debug, Clone, PartialEq)]
pub struct IsacParams {
    pub cycle_s: f64,
    pub dwell_s: f64,
    /// Angular search space `Ω`, rad.
    pub search_sector_rad: f64,
    /// Radar duty cycle `ξ`.
    pub duty_cycle: f64,
    /// Per-target data rate `D`, bit/s.
    pub data_rate_bps: f64,
}

impl Default for IsacParams {
    fn default() -> Self {
        Self {
            cycle_s: 0.1,
            dwell_s: 1e-3,
            search_sector_rad: PI / 2.0,
            duty_cycle: 0.9,
            data_rate_bps: 1e6,
        }
    }
}

impl IsacParams {
    pub fn validate(&self) -> Result<()> {
        positive("t_total", self.cycle_s)?;
        positive("t_dwell", self.dwell_s)?;
        non_negative("data_rate", self.data_rate_bps)?;
        if !(self.search_sector_rad > 0.0 && self.search_sector_rad <= 2.0 * PI) {
            return Err(Error::InvalidParameter {
                name: "omega",
                value: self.search_sector_rad,
                reason: "search sector must lie in (0, 2π]",
            });
        }
        if !(self.duty_cycle > 0.0 && self.duty_cycle <= 1.0) {
            return Err(Error::InvalidParameter {
                name: "xi",
                value: self.duty_cycle,
                reason: "duty cycle must lie in (0, 1]",
            });
        }
        beamwidth_from_duty(self).map(|_| ())
    }
}

/// Unvalidated parameter bundle. Defaults are the published simulation
/// table plus the ISAC timing defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioParams {
    pub radar: RadarParams,
    pub clutter: ClutterParams,
    pub target: TargetParams,
    pub isac: Option<IsacParams>,
}

impl Default for ScenarioParams {
    fn default() -> Self {
        Self {
            radar: RadarParams::default(),
            clutter: ClutterParams::default(),
            target: TargetParams::default(),
            isac: Some(IsacParams::default()),
        }
    }
}

/// A validated scenario with its beamwidth resolved.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    params: ScenarioParams,
    beamwidth: f64,
}

impl Scenario {
    pub fn new(params: ScenarioParams) -> Result<Self> {
        params.radar.validate()?;
        params.clutter.validate()?;
        params.target.validate()?;
        if let Some(isac) = &params.isac {
            isac.validate()?;
        }
        let beamwidth = match (params.radar.beamwidth_rad, &params.isac) {
            (Some(dpsi), _) => dpsi,
            (None, Some(isac)) => beamwidth_from_duty(isac)?,
            (None, None) => {
                return Err(Error::Configuration(
                    "beamwidth needs either delta_psi or ISAC timing".into(),
                ))
            }
        };
        Ok(Self { params, beamwidth })
    }

    /// Copies the parameters, applies `edit`, and re-validates.
    pub fn with(&self, edit: impl FnOnce(&mut ScenarioParams)) -> Result<Self> {
        let mut params = self.params.clone();
        edit(&mut params);
        Self::new(params)
    }

    pub fn params(&self) -> &ScenarioParams {
        &self.params
    }

    pub fn radar(&self) -> &RadarParams {
        &self.params.radar
    }

    pub fn clutter(&self) -> &ClutterParams {
        &self.params.clutter
    }

    pub fn target(&self) -> &TargetParams {
        &self.params.target
    }

    pub fn isac(&self) -> Option<&IsacParams> {
        self.params.isac.as_ref()
    }

    pub fn isac_or_err(&self) -> Result<&IsacParams> {
        self.isac()
            .ok_or_else(|| Error::Configuration("scenario has no ISAC timing parameters".into()))
    }

    /// Effective beamwidth `Δψ`, rad.
    pub fn beamwidth(&self) -> f64 {
        self.beamwidth
    }

    pub fn noise_power(&self) -> f64 {
        noise_power(self.radar().system_temp_k, self.radar().bandwidth_hz)
    }

    pub fn gain(&self) -> f64 {
        self.radar().gain_constant / self.beamwidth
    }

    /// Radar constant `P0 = P_tx·G²`, W.
    pub fn radar_constant(&self) -> f64 {
        let g = self.gain();
        self.radar().tx_power_w * g * g
    }

    pub fn cell_area(&self) -> f64 {
        self.clutter().range_m * self.beamwidth * range_resolution(self.radar().bandwidth_hz)
    }

    pub fn mean_signal_power(&self) -> f64 {
        mean_signal_power(self)
    }
}

/// Thermal noise power `k·T_s·BW`, W.
pub fn noise_power(system_temp_k: f64, bandwidth_hz: f64) -> f64 {
    BOLTZMANN * system_temp_k * bandwidth_hz
}

pub fn antenna_gain(gain_constant: f64, beamwidth_rad: f64) -> Result<f64> {
    positive("delta_psi", beamwidth_rad)?;
    Ok(gain_constant / beamwidth_rad)
}

/// Range resolution `cτ/2` with pulse width `τ = 1/BW`.
pub fn range_resolution(bandwidth_hz: f64) -> f64 {
    SPEED_OF_LIGHT / (2.0 * bandwidth_hz)
}

/// Area of the range-azimuth cell `r_c·Δψ·cτ/2`, m².
pub fn resolution_cell_area(range_m: f64, beamwidth_rad: f64, bandwidth_hz: f64) -> Result<f64> {
    positive("r_c", range_m)?;
    positive("delta_psi", beamwidth_rad)?;
    positive("bw", bandwidth_hz)?;
    Ok(range_m * beamwidth_rad * range_resolution(bandwidth_hz))
}

/// Mean target return `S0 = P_tx·G²·σ_t_avg·r_t^(-2α)`, W.
pub fn mean_signal_power(scenario: &Scenario) -> f64 {
    let target = scenario.target();
    scenario.radar_constant()
        * target.mean_rcs_m2
        * target.range_m.powf(-2.0 * scenario.radar().path_loss_exp)
}

/// Beamwidth that lets one search of `Ω` fit in the radar share of the
/// cycle: `Δψ = T_dwell·Ω / (ξ·T_total)`.
pub fn beamwidth_from_duty(isac: &IsacParams) -> Result<f64> {
    let beamwidth = isac.dwell_s * isac.search_sector_rad / (isac.duty_cycle * isac.cycle_s);
    // NaN (ξ = 0) lands here too
    if !(beamwidth > 0.0 && beamwidth <= isac.search_sector_rad) {
        return Err(Error::InfeasibleDutyCycle {
            xi: isac.duty_cycle,
            beamwidth,
            omega: isac.search_sector_rad,
        });
    }
    Ok(beamwidth)
}
