//! End-to-end acceptance checks. Each check prints one PASS/FAIL line; the
//! process exits non-zero if any check fails.

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use isac_cli::validate::{run_validation, DEFAULT_ALPHAS, DEFAULT_PTX_W};
use isac_cli::{parse_config, run_sweep, EtaMode, SweepParam, SweepRequest};
use isac_core::clutter::{clutter_cdf_series, clutter_spec_from_scenario, CompoundClutterSpec};
use isac_core::detection::false_alarm_margin;
use isac_core::inversion::{cdf_from_cf, CfHandle};
use isac_core::throughput::network_throughput;
use isac_core::{estimate_pfa_mc, pd, pfa, McOptions, QuadratureOptions, Scenario};
use num_complex::Complex64;

const TABLE: &str = "delta_psi_rad = 0.0174533";

fn report(name: &str, ok: bool, detail: String) -> bool {
    println!("[{}] {name}: {detail}", if ok { "PASS" } else { "FAIL" });
    ok
}

fn opts() -> QuadratureOptions {
    QuadratureOptions::default()
}

fn table(alpha: f64) -> Scenario {
    parse_config(&format!("{TABLE}\nalpha = {alpha}")).unwrap()
}

fn oracle_equivalence() -> bool {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for lambda in [0.1, 1.0, 7.5] {
        let spec = CompoundClutterSpec::new(lambda, 1.0).unwrap();
        let handle = spec.handle();
        let top = spec.mean() + 10.0 * spec.variance().sqrt();
        for i in 0..100 {
            let x = top * i as f64 / 99.0;
            let inverted = cdf_from_cf(&handle, x, &opts()).unwrap();
            let series = clutter_cdf_series(&spec, x, 1e-12).unwrap();
            worst = worst.max((inverted - series).abs());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    report(
        "oracle equivalence",
        worst <= 1e-6 && secs < 60.0,
        format!("worst |inversion - series| = {worst:.3e} over 300 points in {secs:.2} s"),
    )
}

fn closed_form_inversion() -> bool {
    let exp = CfHandle::new(|w: f64| 1.0 / Complex64::new(1.0, -w), 0.0, 1.0);
    let f1 = cdf_from_cf(&exp, 1.0, &opts()).unwrap();
    let fln2 = cdf_from_cf(&exp, 2f64.ln(), &opts()).unwrap();
    let e1 = (f1 - 0.6321206).abs();
    let e2 = (fln2 - 0.5).abs();
    report(
        "closed-form inversion",
        e1 <= 1e-7 && e2 <= 1e-7,
        format!("F(1) = {f1:.9} (err {e1:.2e}), F(ln 2) = {fln2:.9} (err {e2:.2e})"),
    )
}

fn monte_carlo_calibration() -> bool {
    let start = Instant::now();
    let base = parse_config(TABLE).unwrap();
    let report_ = run_validation(
        &base,
        &DEFAULT_ALPHAS,
        &DEFAULT_PTX_W,
        &McOptions::default(),
        &opts(),
    )
    .unwrap();
    let secs = start.elapsed().as_secs_f64();
    print!("{}", report_.render());
    report(
        "monte carlo calibration",
        report_.pfa_passes() >= 11 && report_.pd_passes() >= 11 && secs < 300.0,
        format!(
            "pfa {}/12, pd {}/12 inside 99% Wilson intervals at 10^6 trials in {secs:.1} s",
            report_.pfa_passes(),
            report_.pd_passes()
        ),
    )
}

fn atom_dominated_spot_value() -> bool {
    let s = table(2.0);
    let spec = clutter_spec_from_scenario(&s).unwrap();
    let analytic = pfa(&s, &opts()).unwrap();
    let series = 1.0 - clutter_cdf_series(&spec, false_alarm_margin(&s), 1e-12).unwrap();
    let mc = estimate_pfa_mc(&s, &McOptions::default()).unwrap();
    let bound = 1.0 - (-1.308085f64).exp();
    let ok = (analytic - bound).abs() <= 1e-3
        && (series - bound).abs() <= 1e-3
        && (analytic - series).abs() <= 1e-6
        && mc.contains(analytic);
    report(
        "atom-dominated spot value",
        ok,
        format!(
            "lambda = {:.7}, P_fa = {analytic:.7}, series {series:.7}, MC {:.6} [{:.6}, {:.6}], 1 - e^-lambda = {bound:.7}",
            spec.lambda, mc.estimate, mc.ci_low, mc.ci_high
        ),
    )
}

fn nondecreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] >= w[0] - 1e-9)
}

fn nonincreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] <= w[0] + 1e-9)
}

fn trend_power_and_path_loss() -> bool {
    let mut ok = true;
    let mut notes = Vec::new();
    // Table threshold, then one high enough to expose the continuous part
    for eta in [1e-13, 0.03] {
        let base = table(2.0).with(|p| p.radar.threshold_w = eta).unwrap();
        let by_power: Vec<f64> = (0..10)
            .map(|i| {
                let ptx = 0.1 + 0.1 * i as f64;
                pfa(&base.with(|p| p.radar.tx_power_w = ptx).unwrap(), &opts()).unwrap()
            })
            .collect();
        let by_alpha: Vec<f64> = (0..10)
            .map(|i| {
                let alpha = 2.0 + 2.0 * i as f64 / 9.0;
                pfa(
                    &base.with(|p| p.radar.path_loss_exp = alpha).unwrap(),
                    &opts(),
                )
                .unwrap()
            })
            .collect();
        ok &= nondecreasing(&by_power) && nonincreasing(&by_alpha);
        notes.push(format!(
            "eta {eta:e}: P_tx {:.4}..{:.4}, alpha {:.4}..{:.4}",
            by_power[0], by_power[9], by_alpha[0], by_alpha[9]
        ));
    }
    report("trend: power and path loss", ok, notes.join("; "))
}

fn trend_target_rcs_invariance() -> bool {
    let base = table(2.0);
    let bits: Vec<u64> = [1.0, 10.0, 100.0]
        .iter()
        .map(|&rcs| {
            pfa(&base.with(|p| p.target.mean_rcs_m2 = rcs).unwrap(), &opts())
                .unwrap()
                .to_bits()
        })
        .collect();
    report(
        "trend: target rcs invariance",
        bits.windows(2).all(|w| w[0] == w[1]),
        format!(
            "P_fa = {} for sigma_t in 1, 10, 100 m^2",
            f64::from_bits(bits[0])
        ),
    )
}

fn trend_surface_clutter_saturation() -> bool {
    let base = table(2.0);
    let mut pfas = Vec::new();
    let mut worst_gap = 0.0f64;
    for i in 0..10 {
        let sigma0 = 0.01 * 100f64.powf(i as f64 / 9.0);
        let s = SweepParam::Sigma0.apply(&base, sigma0).unwrap();
        let p = pfa(&s, &opts()).unwrap();
        let bound = 1.0 - clutter_spec_from_scenario(&s).unwrap().atom();
        worst_gap = worst_gap.max((p - bound).abs());
        pfas.push(p);
    }
    let ok = nondecreasing(&pfas) && worst_gap <= 1e-3 && 1.0 - pfas[9] < 1e-5;
    report(
        "trend: surface clutter saturation",
        ok,
        format!(
            "P_fa {:.5} -> {:.8} over sigma_o 0.01..1, max distance to 1 - e^-lambda {worst_gap:.2e}",
            pfas[0], pfas[9]
        ),
    )
}

fn trend_duty_cycle_throughput() -> bool {
    let request = SweepRequest {
        param: SweepParam::Duty,
        from: 0.02,
        to: 1.0,
        points: 50,
        alphas: vec![2.0],
        eta_mode: EtaMode::Fixed,
    };
    let defaults = run_sweep(&parse_config("").unwrap(), &request, &opts()).unwrap();
    let low = run_sweep(&parse_config("ptx_w = 1e-13").unwrap(), &request, &opts()).unwrap();
    let best = low.argmax_per_alpha()[0];
    let idx = low.rows.iter().position(|r| r == best).unwrap();
    let ok =
        defaults.rows[49].gamma_bps == 0.0 && low.rows[49].gamma_bps == 0.0 && idx > 0 && idx < 49;
    report(
        "trend: duty-cycle throughput",
        ok,
        format!(
            "gamma(1) = 0; low power argmax at xi = {:.4} (index {idx}), gamma = {:.6e} bit/s",
            best.value, best.gamma_bps
        ),
    )
}

fn trend_bandwidth_with_resolved_threshold() -> bool {
    let base = parse_config("bw_hz = 100e6").unwrap();
    let request = SweepRequest {
        param: SweepParam::Bw,
        from: 10e6,
        to: 1e9,
        points: 100,
        alphas: vec![2.0],
        eta_mode: EtaMode::Resolve { target_pfa: None },
    };
    let rows = run_sweep(&base, &request, &opts()).unwrap().rows;
    let pfas: Vec<f64> = rows.iter().map(|r| r.pfa).collect();
    let min = (0..pfas.len())
        .min_by(|&a, &b| pfas[a].total_cmp(&pfas[b]))
        .unwrap();
    let ok = min > 0
        && min < pfas.len() - 1
        && nonincreasing(&pfas[..=min])
        && pfas[min + 1..].iter().all(|&p| p > pfas[min]);
    report(
        "trend: bandwidth with resolved threshold",
        ok,
        format!(
            "P_fa {:.4} at {:.0} MHz, minimum {:.4} at {:.0} MHz, {:.4} at {:.0} MHz",
            pfas[0],
            rows[0].value / 1e6,
            pfas[min],
            rows[min].value / 1e6,
            pfas[pfas.len() - 1],
            rows[pfas.len() - 1].value / 1e6
        ),
    )
}

fn exact_identities() -> bool {
    let mut ok = true;
    for alpha in [2.0, 3.0, 4.0] {
        let s = table(alpha).with(|p| p.target.mean_rcs_m2 = 0.0).unwrap();
        ok &= pfa(&s, &opts()).unwrap().to_bits() == pd(&s, &opts()).unwrap().to_bits();
    }
    let pd_pfa = ok;

    let low = parse_config("ptx_w = 1e-13").unwrap();
    let mut product_law = true;
    let mut worst = 0.0f64;
    let request = SweepRequest {
        param: SweepParam::Duty,
        from: 0.02,
        to: 1.0,
        points: 50,
        alphas: vec![2.0],
        eta_mode: EtaMode::Fixed,
    };
    let xi_grid = request.grid();
    let reference = {
        let s = SweepParam::Duty.apply(&low, xi_grid[0]).unwrap();
        s.beamwidth() * xi_grid[0]
    };
    for &xi in &xi_grid {
        let s = SweepParam::Duty.apply(&low, xi).unwrap();
        let t = network_throughput(&s, &opts()).unwrap();
        product_law &= t.gamma == t.beta * (1.0 - xi) * s.isac().unwrap().data_rate_bps;
        worst = worst.max((s.beamwidth() * xi - reference).abs() / reference);
    }
    ok &= product_law && worst <= 1e-15;
    report(
        "exact identities",
        ok,
        format!(
            "P_d == P_fa at sigma_t = 0: {pd_pfa}; gamma == beta(1 - xi)D: {product_law}; \
             max relative spread of delta_psi * xi: {worst:.2e}"
        ),
    )
}

fn run_cli(dir: &Path, out: &str, args: &[&str]) -> Vec<u8> {
    let path = dir.join(out);
    let status = Command::new(env!("CARGO_BIN_EXE_isac"))
        .args(args)
        .arg("--out")
        .arg(&path)
        .status()
        .unwrap();
    assert!(status.success(), "{args:?}: {status}");
    std::fs::read(path).unwrap()
}

fn deterministic_outputs() -> bool {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("table.cfg");
    std::fs::write(&config, format!("{TABLE}\n")).unwrap();
    let config = config.to_str().unwrap();
    let sweep = [
        "sweep", "--config", config, "--param", "ptx", "--from", "0.1", "--to", "1", "--points",
        "25",
    ];
    let validate = [
        "validate", "--config", config, "--trials", "50000", "--seed", "7",
    ];
    let mut identical = true;
    for (name, args) in [("sweep", &sweep[..]), ("validate", &validate[..])] {
        let first = run_cli(dir.path(), &format!("{name}-a"), args);
        let again = run_cli(dir.path(), &format!("{name}-b"), args);
        let mut one = args.to_vec();
        one.extend(["--threads", "1"]);
        let single = run_cli(dir.path(), &format!("{name}-1"), &one);
        let mut four = args.to_vec();
        four.extend(["--threads", "4"]);
        let quad = run_cli(dir.path(), &format!("{name}-4"), &four);
        identical &= !first.is_empty() && first == again && first == single && first == quad;
    }
    report(
        "deterministic outputs",
        identical,
        "sweep and validate outputs byte-identical across runs and 1/4/default threads".into(),
    )
}

type Check = (&'static str, fn() -> bool);

fn main() {
    let checks: [Check; 11] = [
        ("oracle equivalence", oracle_equivalence),
        ("closed-form inversion", closed_form_inversion),
        ("monte carlo calibration", monte_carlo_calibration),
        ("atom-dominated spot value", atom_dominated_spot_value),
        ("trend: power and path loss", trend_power_and_path_loss),
        ("trend: target rcs invariance", trend_target_rcs_invariance),
        (
            "trend: surface clutter saturation",
            trend_surface_clutter_saturation,
        ),
        ("trend: duty-cycle throughput", trend_duty_cycle_throughput),
        (
            "trend: bandwidth with resolved threshold",
            trend_bandwidth_with_resolved_threshold,
        ),
        ("exact identities", exact_identities),
        ("deterministic outputs", deterministic_outputs),
    ];
    let mut failed = 0;
    for (name, check) in checks {
        let ok = std::panic::catch_unwind(check).unwrap_or_else(|_| {
            println!("[FAIL] {name}: panicked");
            false
        });
        if !ok {
            failed += 1;
        }
    }
    println!(
        "acceptance: {}/{} checks passed",
        checks.len() - failed,
        checks.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
