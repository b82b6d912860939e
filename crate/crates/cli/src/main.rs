use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use isac_cli::validate::{DEFAULT_ALPHAS, DEFAULT_PTX_W};
use isac_cli::{
    load_config, metrics_report, parse_config, run_sweep, run_validation, threshold_report,
    write_output, CliError, EtaMode, SweepParam, SweepRequest, EXIT_USAGE, EXIT_VALIDATION,
};
use isac_core::{McOptions, QuadratureOptions, SamplingMode, Scenario, TargetModel};

#[derive(Parser)]
#[command(
    name = "isac",
    version,
    about = "Radar detection in discrete clutter and ISAC throughput"
)]
struct Cli {
    /// Scenario file (`key = value` lines); defaults are used when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Monte Carlo seed.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Absolute tolerance of the CDF quadrature.
    #[arg(long, global = true, default_value_t = 1e-8)]
    quad_tol: f64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// P_fa, P_d and throughput of the configured scenario.
    Metrics,
    /// Sweep one parameter and write a CSV table.
    Sweep {
        #[arg(long, value_parser = parse_param)]
        param: SweepParam,
        #[arg(long, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, allow_negative_numbers = true)]
        to: f64,
        #[arg(long, default_value_t = 50)]
        points: usize,
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_ALPHAS)]
        alphas: Vec<f64>,
        #[arg(long, value_enum, default_value_t = EtaArg::Fixed)]
        eta_mode: EtaArg,
        /// P_fa held by `--eta-mode resolve` (default: the attainable maximum).
        #[arg(long)]
        pfa_ref: Option<f64>,
    },
    /// Compare analytic metrics with Monte Carlo estimates.
    Validate {
        #[arg(long, default_value_t = 1_000_000)]
        trials: u64,
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_ALPHAS)]
        alphas: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_PTX_W)]
        ptx: Vec<f64>,
        #[arg(long, value_enum, default_value_t = ModeArg::Lumped)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t = TargetArg::Mean)]
        target_model: TargetArg,
    },
    /// Threshold that yields a given false-alarm probability.
    Threshold {
        #[arg(long)]
        target: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum EtaArg {
    Fixed,
    Resolve,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Lumped,
    Position,
}

#[derive(Clone, Copy, ValueEnum)]
enum TargetArg {
    Mean,
    Swerling1,
}

fn parse_param(s: &str) -> Result<SweepParam, String> {
    s.parse()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() {
                ExitCode::from(EXIT_USAGE as u8)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> Result<i32, CliError> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    }
    let scenario = match &cli.config {
        Some(path) => load_config(path)?,
        None => parse_config("")?,
    };
    let opts = QuadratureOptions::with_tol(cli.quad_tol);
    opts.validate().map_err(CliError::Core)?;
    let emit = |text: &str| -> Result<(), CliError> {
        match &cli.out {
            Some(path) => write_output(path, text),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    };

    match cli.command {
        Command::Metrics => emit(&metrics_report(&scenario, &opts)?)?,
        Command::Threshold { target } => emit(&threshold_report(&scenario, target, &opts)?)?,
        Command::Sweep {
            param,
            from,
            to,
            points,
            alphas,
            eta_mode,
            pfa_ref,
        } => {
            let eta_mode = match eta_mode {
                EtaArg::Fixed if pfa_ref.is_some() => {
                    return Err(CliError::Usage(
                        "--pfa-ref only applies with --eta-mode resolve".into(),
                    ))
                }
                EtaArg::Fixed => EtaMode::Fixed,
                EtaArg::Resolve => EtaMode::Resolve {
                    target_pfa: pfa_ref,
                },
            };
            let request = SweepRequest {
                param,
                from,
                to,
                points,
                alphas,
                eta_mode,
            };
            sweep(&scenario, &request, &opts, &emit)?;
        }
        Command::Validate {
            trials,
            alphas,
            ptx,
            mode,
            target_model,
        } => {
            let mc = McOptions {
                trials,
                seed: cli.seed,
                mode: match mode {
                    ModeArg::Lumped => SamplingMode::CellLumped,
                    ModeArg::Position => SamplingMode::PositionResolved,
                },
                target_model: match target_model {
                    TargetArg::Mean => TargetModel::MeanS0,
                    TargetArg::Swerling1 => TargetModel::Swerling1,
                },
                ..Default::default()
            };
            let report = run_validation(&scenario, &alphas, &ptx, &mc, &opts)?;
            emit(&report.render())?;
            if !report.passed() {
                return Ok(EXIT_VALIDATION);
            }
        }
    }
    Ok(0)
}

fn sweep(
    scenario: &Scenario,
    request: &SweepRequest,
    opts: &QuadratureOptions,
    emit: &dyn Fn(&str) -> Result<(), CliError>,
) -> Result<(), CliError> {
    let table = run_sweep(scenario, request, opts)?;
    emit(&table.to_csv())?;
    if request.param == SweepParam::Duty {
        for row in table.argmax_per_alpha() {
            eprintln!(
                "max gamma at alpha = {}: duty = {}, gamma = {} bit/s, pd = {}",
                isac_cli::fmt_num(row.alpha),
                isac_cli::fmt_num(row.value),
                isac_cli::fmt_num(row.gamma_bps),
                isac_cli::fmt_num(row.pd)
            );
        }
    }
    Ok(())
}
