//! Flat `key = value` scenario files.
//!
//! ```text
//! # 60 GHz, narrow beam
//! ptx_w = 0.5
//! delta_psi_rad = 0.0174533
//! ```
//!
//! Keys left out keep their defaults. Unknown keys, repeated keys and
//! malformed numbers are rejected with the offending line number.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use isac_core::{Error as CoreError, IsacParams, Scenario, ScenarioParams};

pub const KEYS: [&str; 20] = [
    "f_c_hz",
    "bw_hz",
    "ptx_w",
    "g0",
    "sigma_c_m2",
    "sigma_t_avg_m2",
    "rho_c_per_m2",
    "g_c_avg",
    "eta_w",
    "r_c_m",
    "r_t_m",
    "t_s_k",
    "alpha",
    "duty_cycle",
    "t_total_s",
    "t_dwell_s",
    "omega_rad",
    "rho_t_per_m2",
    "data_rate_bps",
    "delta_psi_rad",
];

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    /// 1-based; `None` when the problem is not tied to one line.
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

fn at(line: usize, message: impl Into<String>) -> ConfigError {
    ConfigError {
        line: Some(line),
        message: message.into(),
    }
}

/// Parses a config document into a validated scenario.
pub fn parse_config(text: &str) -> Result<Scenario, ConfigError> {
    let mut params = ScenarioParams::default();
    let mut seen: HashMap<&'static str, usize> = HashMap::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (key, value) = body
            .split_once('=')
            .ok_or_else(|| at(line, format!("expected `key = value`, found `{body}`")))?;
        let key = key.trim();
        let value = value.trim();
        let key = *KEYS
            .iter()
            .find(|k| **k == key)
            .ok_or_else(|| at(line, format!("unknown key `{key}`")))?;
        if let Some(first) = seen.insert(key, line) {
            return Err(at(line, format!("`{key}` already set on line {first}")));
        }
        let number: f64 = value
            .parse()
            .map_err(|_| at(line, format!("`{key}`: `{value}` is not a number")))?;
        if !number.is_finite() {
            return Err(at(line, format!("`{key}` must be finite")));
        }
        assign(&mut params, key, number);
    }

    Scenario::new(params).map_err(|err| {
        let line = config_key(&err).and_then(|key| seen.get(key).copied());
        ConfigError {
            line,
            message: err.to_string(),
        }
    })
}

pub fn load_config(path: &Path) -> Result<Scenario, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|err| ConfigError {
        line: None,
        message: format!("cannot read {}: {err}", path.display()),
    })?;
    parse_config(&text).map_err(|err| ConfigError {
        message: format!("{}: {}", path.display(), err.message),
        ..err
    })
}

fn assign(p: &mut ScenarioParams, key: &str, v: f64) {
    match key {
        "f_c_hz" => p.radar.carrier_hz = v,
        "bw_hz" => p.radar.bandwidth_hz = v,
        "ptx_w" => p.radar.tx_power_w = v,
        "g0" => p.radar.gain_constant = v,
        "eta_w" => p.radar.threshold_w = v,
        "t_s_k" => p.radar.system_temp_k = v,
        "alpha" => p.radar.path_loss_exp = v,
        "delta_psi_rad" => p.radar.beamwidth_rad = Some(v),
        "sigma_c_m2" => p.clutter.rcs_m2 = v,
        "rho_c_per_m2" => p.clutter.density_per_m2 = v,
        "g_c_avg" => p.clutter.fading_mean = v,
        "r_c_m" => p.clutter.range_m = v,
        "sigma_t_avg_m2" => p.target.mean_rcs_m2 = v,
        "r_t_m" => p.target.range_m = v,
        "rho_t_per_m2" => p.target.density_per_m2 = v,
        "duty_cycle" => isac(p).duty_cycle = v,
        "t_total_s" => isac(p).cycle_s = v,
        "t_dwell_s" => isac(p).dwell_s = v,
        "omega_rad" => isac(p).search_sector_rad = v,
        "data_rate_bps" => isac(p).data_rate_bps = v,
        _ => unreachable!("key list and assignments out of sync: {key}"),
    }
}

fn isac(p: &mut ScenarioParams) -> &mut IsacParams {
    p.isac.get_or_insert_with(Default::default)
}

/// Config key behind a scenario validation error.
fn config_key(err: &CoreError) -> Option<&'static str> {
    let name = match err {
        CoreError::InvalidParameter { name, .. } => *name,
        CoreError::InfeasibleDutyCycle { .. } => "xi",
        _ => return None,
    };
    Some(match name {
        "f_c" => "f_c_hz",
        "bw" => "bw_hz",
        "p_tx" => "ptx_w",
        "g0" => "g0",
        "t_s" => "t_s_k",
        "eta" => "eta_w",
        "alpha" => "alpha",
        "delta_psi" => "delta_psi_rad",
        "rho_c" => "rho_c_per_m2",
        "sigma_c" => "sigma_c_m2",
        "g_c_avg" => "g_c_avg",
        "r_c" => "r_c_m",
        "sigma_t_avg" => "sigma_t_avg_m2",
        "r_t" => "r_t_m",
        "rho_t" => "rho_t_per_m2",
        "t_total" => "t_total_s",
        "t_dwell" => "t_dwell_s",
        "data_rate" => "data_rate_bps",
        "omega" => "omega_rad",
        "xi" => "duty_cycle",
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_gives_defaults() {
        let s = parse_config("").unwrap();
        assert_eq!(s, Scenario::new(ScenarioParams::default()).unwrap());
        assert_eq!(s.radar().tx_power_w, 1.0);
        assert_eq!(s.radar().bandwidth_hz, 20e6);
        assert_eq!(s.clutter().rcs_m2, 0.1);
        assert_eq!(s.target().mean_rcs_m2, 10.0);
        assert_eq!(s.radar().threshold_w, 1e-13);
        assert_eq!(s.isac().unwrap().duty_cycle, 0.9);
        assert!(parse_config("# only a comment\n\n   \n").is_ok());
    }

    #[test]
    fn single_override() {
        let s = parse_config("ptx_w = 0.5").unwrap();
        let mut p = ScenarioParams::default();
        p.radar.tx_power_w = 0.5;
        assert_eq!(s, Scenario::new(p).unwrap());
    }

    #[test]
    fn every_key_is_accepted() {
        let doc: String = KEYS
            .iter()
            .map(|k| match *k {
                "duty_cycle" => format!("{k} = 0.5\n"),
                "alpha" => format!("{k} = 3  # trailing comment\n"),
                "delta_psi_rad" => format!("{k}=0.02\n"),
                _ => format!("{k} = 1e-3\n"),
            })
            .collect();
        let doc = doc.replace("t_total_s = 1e-3", "t_total_s = 1");
        let s = parse_config(&doc).unwrap();
        assert_eq!(s.radar().path_loss_exp, 3.0);
        assert_eq!(s.beamwidth(), 0.02);
        assert_eq!(s.isac().unwrap().cycle_s, 1.0);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse_config("ptx_w = 1\nalpha = 0.5\n").unwrap_err();
        assert_eq!(err.line, Some(2));
        assert!(err.message.contains("alpha"));

        let err = parse_config("\n\nbogus = 1").unwrap_err();
        assert_eq!(err.line, Some(3));
        assert!(err.to_string().contains("unknown key `bogus`"));

        let err = parse_config("ptx_w = one").unwrap_err();
        assert_eq!(err.line, Some(1));

        let err = parse_config("ptx_w 1").unwrap_err();
        assert_eq!(err.line, Some(1));

        let err = parse_config("ptx_w = 1\nptx_w = 2").unwrap_err();
        assert_eq!(err.line, Some(2));

        let err = parse_config("eta_w = inf").unwrap_err();
        assert_eq!(err.line, Some(1));
    }

    #[test]
    fn infeasible_timing_points_at_duty_cycle() {
        let err = parse_config("ptx_w = 1\nduty_cycle = 0.001").unwrap_err();
        assert_eq!(err.line, Some(2));
    }
}
