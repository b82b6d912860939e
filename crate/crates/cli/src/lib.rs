//! Command-line front end: config files, metric reports, sweeps and Monte
//! Carlo validation runs.

pub mod config;
pub mod sweep;
pub mod validate;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use isac_core::clutter::clutter_spec_from_scenario;
use isac_core::detection::{evaluate, threshold_tolerance};
use isac_core::throughput::throughput_at;
use isac_core::{threshold_for_pfa, Error as CoreError, QuadratureOptions, Scenario};

pub use config::{load_config, parse_config, ConfigError};
pub use sweep::{
    fmt_num, run_sweep, EtaMode, SweepParam, SweepRequest, SweepRow, SweepTable, CSV_HEADER,
};
pub use validate::{run_validation, ValidationReport};

pub const EXIT_USAGE: i32 = 1;
pub const EXIT_COMPUTE: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("config: {0}")]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Core(CoreError),
    #[error("sweep point {param} = {value}, alpha = {alpha}: {source}")]
    SweepPoint {
        param: &'static str,
        value: f64,
        alpha: f64,
        source: CoreError,
    },
    #[error("{0}")]
    Unattainable(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config(_) | CliError::Io { .. } => EXIT_USAGE,
            CliError::Unattainable(_) => EXIT_COMPUTE,
            CliError::Core(err) | CliError::SweepPoint { source: err, .. } => core_exit_code(err),
        }
    }
}

fn core_exit_code(err: &CoreError) -> i32 {
    match err {
        CoreError::InvalidParameter { .. }
        | CoreError::InfeasibleDutyCycle { .. }
        | CoreError::Configuration(_)
        | CoreError::InvalidGeometry { .. } => EXIT_USAGE,
        CoreError::OracleInfeasible { .. }
        | CoreError::ConvergenceFailure { .. }
        | CoreError::UnattainableTarget { .. } => EXIT_COMPUTE,
    }
}

/// Console report of the operating point.
pub fn metrics_report(scenario: &Scenario, opts: &QuadratureOptions) -> Result<String, CliError> {
    let spec = clutter_spec_from_scenario(scenario).map_err(CliError::Core)?;
    let m = evaluate(scenario, opts).map_err(CliError::Core)?;
    let mut out = String::new();
    let mut line = |label: &str, value: f64, unit: &str| {
        let _ = writeln!(out, "{label:<10} = {}{unit}", fmt_num(value));
    };
    line("P_fa", m.p_fa, "");
    line("P_d", m.p_d, "");
    if scenario.isac().is_some() {
        let t = throughput_at(scenario, m.p_d).map_err(CliError::Core)?;
        line("beta", t.beta, "");
        line("gamma", t.gamma, " bit/s");
    }
    line("delta_psi", scenario.beamwidth(), " rad");
    line("N_p", scenario.noise_power(), " W");
    line("S0", scenario.mean_signal_power(), " W");
    line("lambda", spec.lambda, "");
    line("mark_scale", spec.mark_scale, " W");
    Ok(out)
}

/// Console report of the threshold meeting `target_pfa`.
pub fn threshold_report(
    scenario: &Scenario,
    target_pfa: f64,
    opts: &QuadratureOptions,
) -> Result<String, CliError> {
    if !(target_pfa > 0.0 && target_pfa < 1.0) {
        return Err(CliError::Usage(format!(
            "target false-alarm probability {target_pfa} is not in (0, 1)"
        )));
    }
    let sol = threshold_for_pfa(scenario, target_pfa, opts).map_err(|err| match err {
        CoreError::UnattainableTarget { max, .. } => {
            let lambda = clutter_spec_from_scenario(scenario).map_or(0.0, |s| s.lambda);
            CliError::Unattainable(format!(
                "target P_fa {target_pfa} is unattainable: the attainable maximum is \
                 1 - e^(-lambda) = {} (lambda = {})",
                fmt_num(max),
                fmt_num(lambda)
            ))
        }
        other => CliError::Core(other),
    })?;
    let mut out = String::new();
    let _ = writeln!(out, "eta        = {} W", fmt_num(sol.threshold_w));
    let _ = writeln!(out, "P_fa       = {}", fmt_num(sol.achieved_pfa));
    let _ = writeln!(
        out,
        "tolerance  = {}",
        fmt_num(threshold_tolerance(target_pfa))
    );
    if sol.at_boundary {
        let _ = writeln!(
            out,
            "boundary: target is at the attainable maximum; eta sits just above N_p = {} W",
            fmt_num(scenario.noise_power())
        );
    }
    Ok(out)
}

/// Writes `contents` to `path`, removing whatever was written if that fails.
pub fn write_output(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| {
        let _ = std::fs::remove_file(path);
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    })
}
