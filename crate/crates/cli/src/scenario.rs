//! Scenario execution: runs a validated config, writes its artifact
//! files into the output directory and returns summary lines for the
//! terminal.
//!
//! Artifact files have fixed names per mode. CSV uses `.` decimals, LF
//! line endings, a header row and `inf` for infinities; `summary.json`
//! maps non-finite values to `null`. Given the same config and seed,
//! every artifact is byte-identical across runs.

use std::path::{Path, PathBuf};

use serde::Serialize;
use upsilon_core::{
    analytic_excited_trajectory, asymptotic_upsilon_small, asymptotic_upsilon_ultralarge,
    bloch_from_density, bloch_grid_scan, classify_regime, critical_time, ddr_sweep,
    density_from_bloch, effective_reduction, entropy_error, entropy_error_floor, entropy_ledger,
    evolve, evolve3, find_violation_threshold, fit_effective_decay, ledger_time_grid, min_upsilon,
    prepare_by_pre_evolution, simulate_shots, steady3, steady_deviation2, steady_deviation3,
    steady_spectrum, steady_state, tilde_spectrum, time_scales, Density2, Density3,
    EnergyConvention, NoiseModel, Regime, SystemParams2, ThreeLevelParams, Trajectory2,
};

use crate::config::{InitialState, Scenario, ScenarioConfig, TwoLevelRun};
use crate::CliError;

/// Minimum balance below which a cell counts as a violation, mirroring
/// the scan tolerance.
const VIOLATION_TOL: f64 = -1e-9;

/// What a run produced: artifact file paths and summary lines to print.
pub struct RunOutcome {
    pub artifacts: Vec<PathBuf>,
    pub lines: Vec<String>,
}

fn num(e: upsilon_core::Error) -> CliError {
    CliError::Numerics(e.to_string())
}

fn io(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

fn linspace(hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| hi * i as f64 / (n - 1) as f64).collect()
}

fn regime_label(r: Regime) -> &'static str {
    match r {
        Regime::Small => "small",
        Regime::Intermediate => "intermediate",
        Regime::Large => "large",
        Regime::UltraLarge => "ultra-large",
    }
}

fn resolve_initial(run: &TwoLevelRun) -> Result<Density2, CliError> {
    match &run.initial {
        InitialState::Excited => Ok(Density2::excited()),
        InitialState::Bloch(b) => density_from_bloch(b).map_err(num),
        InitialState::PreEvolve(tau) => prepare_by_pre_evolution(&run.params, *tau).map_err(num),
    }
}

/// Two-level trajectory on `times`; the excited start takes the
/// closed-form path, everything else the integrator.
fn two_level_trajectory(run: &TwoLevelRun, times: &[f64]) -> Result<Trajectory2, CliError> {
    match &run.initial {
        InitialState::Excited => analytic_excited_trajectory(&run.params, times).map_err(num),
        _ => {
            let rho0 = resolve_initial(run)?;
            evolve(&run.params, &rho0, times).map_err(num)
        }
    }
}

fn trajectory_csv(traj: &Trajectory2) -> String {
    let mut out = String::from("t,x,y,z\n");
    for (k, b) in traj.states.iter().enumerate() {
        out.push_str(&format!("{},{},{},{}\n", traj.times[k], b.x, b.y, b.z));
    }
    out
}

#[derive(Serialize)]
struct Summary<'a> {
    mode: &'a str,
    seed: u64,
    artifacts: &'a [String],
    result: serde_json::Value,
}

#[derive(Serialize)]
struct EvolveResult {
    omega_rad_per_s: f64,
    gamma_rad_per_s: f64,
    drive_decay_ratio: f64,
    regime: &'static str,
    initial: String,
    tau_a_s: f64,
    tau_b_s: f64,
    tau_coh_s: f64,
    final_bloch: [f64; 3],
    steady_bloch: [f64; 3],
    rho22_final: f64,
    rho22_steady: f64,
}

#[derive(Serialize)]
struct FormulaSample {
    t_s: f64,
    scaled_time: f64,
    formula_upsilon: f64,
    ledger_upsilon: f64,
}

#[derive(Serialize)]
struct LedgerResult {
    omega_rad_per_s: f64,
    gamma_rad_per_s: f64,
    drive_decay_ratio: f64,
    regime: &'static str,
    bath_convention: &'static str,
    initial: String,
    min_upsilon: f64,
    t_star_s: f64,
    rho22_final: f64,
    rho22_steady: f64,
    ln_population_ratio: f64,
    beta: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    critical_time_s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    small_drive_samples: Option<Vec<FormulaSample>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    strong_drive_samples: Option<Vec<FormulaSample>>,
}

#[derive(Serialize)]
struct BetaSeries {
    ratios: Vec<f64>,
    ln_population_ratio: Vec<f64>,
    delta_e: Vec<f64>,
    beta: Vec<f64>,
}

#[derive(Serialize)]
struct SweepSummary {
    initial: String,
    ratio_min: f64,
    ratio_max: f64,
    points: usize,
    min_upsilon: f64,
    argmin_ratio: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    threshold_ratio: Option<f64>,
    sign_change_ratios: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    beta_series: Option<BetaSeries>,
}

#[derive(Serialize)]
struct ScanSummary {
    omega_rad_per_s: f64,
    gamma_rad_per_s: f64,
    drive_decay_ratio: f64,
    z_count: usize,
    r_count: usize,
    valid_cells: usize,
    violation_cells: usize,
    min_over_grid: f64,
    contour_points: usize,
}

#[derive(Serialize)]
struct ReductionInfo {
    leak_r: f64,
    xi: f64,
    beta_tilde: f64,
    lambda_tilde_minus: f64,
    lambda_tilde_plus: f64,
}

#[derive(Serialize)]
struct DeviationFinal {
    ladder: f64,
    reduced: f64,
}

#[derive(Serialize)]
struct LadderResult {
    omega_rad_per_s: f64,
    omega_tilde_rad_per_s: f64,
    gamma_e_rad_per_s: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    gamma_eff_rad_per_s: Option<f64>,
    valid_reduction: bool,
    initial_level: usize,
    steady_populations: [f64; 3],
    final_populations: [f64; 3],
    #[serde(skip_serializing_if = "Option::is_none")]
    reduction: Option<ReductionInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    deviation_final: Option<DeviationFinal>,
}

#[derive(Serialize)]
struct ReductionScanSummary {
    gamma_e_over_gamma: f64,
    leak_r: f64,
    points: usize,
}

#[derive(Serialize)]
struct FitResult {
    omega_tilde_rad_per_s: f64,
    gamma_e_rad_per_s: f64,
    gamma_eff_formula: f64,
    gamma_eff_fit: f64,
    relative_error: f64,
    window_lo_s: f64,
    window_hi_s: f64,
    window_samples: usize,
}

#[derive(Serialize)]
struct NoiseSummary {
    omega_rad_per_s: f64,
    gamma_rad_per_s: f64,
    n_shots: u64,
    eps_exp: f64,
    seed: u64,
    floor_at_pg_1e3: f64,
    curve_points: usize,
}

fn to_value<T: Serialize>(v: &T) -> Result<serde_json::Value, CliError> {
    serde_json::to_value(v).map_err(|e| CliError::Numerics(format!("serialising summary: {e}")))
}

type ModeOutput = (Vec<(&'static str, String)>, serde_json::Value, Vec<String>);

fn run_evolve(run: &TwoLevelRun, points: usize) -> Result<ModeOutput, CliError> {
    let times = linspace(run.horizon, points);
    let traj = two_level_trajectory(run, &times)?;
    let ts = time_scales(&run.params);
    let steady = bloch_from_density(&steady_state(&run.params).map_err(num)?);
    let last = traj.states[traj.states.len() - 1];
    let result = EvolveResult {
        omega_rad_per_s: run.params.omega(),
        gamma_rad_per_s: run.params.gamma(),
        drive_decay_ratio: run.params.ratio(),
        regime: regime_label(classify_regime(run.params.ratio())),
        initial: run.initial.label(),
        tau_a_s: ts.tau_a,
        tau_b_s: ts.tau_b,
        tau_coh_s: ts.tau_coh,
        final_bloch: [last.x, last.y, last.z],
        steady_bloch: [steady.x, steady.y, steady.z],
        rho22_final: 0.5 * (1.0 + last.z),
        rho22_steady: 0.5 * (1.0 + steady.z),
    };
    let lines = vec![
        format!("regime: {} (ratio {})", result.regime, result.drive_decay_ratio),
        format!(
            "final state: x = {}, y = {}, z = {}",
            last.x, last.y, last.z
        ),
    ];
    Ok((
        vec![("trajectory.csv", trajectory_csv(&traj))],
        to_value(&result)?,
        lines,
    ))
}

/// Nearest-grid ledger samples against an asymptotic formula; entries
/// outside the formula domain or the horizon are skipped.
fn formula_samples(
    ledger: &upsilon_core::EntropyLedger,
    scaled_times: &[f64],
    scale_rate: f64,
    formula: impl Fn(f64) -> upsilon_core::Result<f64>,
) -> Vec<FormulaSample> {
    let horizon = *ledger.times.last().unwrap();
    let n = ledger.times.len() - 1;
    let mut out = Vec::new();
    for &st in scaled_times {
        let t = st / scale_rate;
        if t > horizon {
            continue;
        }
        let Ok(f) = formula(st) else { continue };
        let k = ((t / horizon) * n as f64).round() as usize;
        out.push(FormulaSample {
            t_s: ledger.times[k],
            scaled_time: st,
            formula_upsilon: f,
            ledger_upsilon: ledger.upsilon[k],
        });
    }
    out
}

fn run_ledger(
    run: &TwoLevelRun,
    per_scale: usize,
    convention: upsilon_core::BathConvention,
) -> Result<ModeOutput, CliError> {
    let p = &run.params;
    let times = ledger_time_grid(p, run.horizon, per_scale);
    let traj = two_level_trajectory(run, &times)?;
    let ledger = entropy_ledger(&traj, convention, &EnergyConvention::default()).map_err(num)?;
    let (min, t_star) = min_upsilon(&ledger).map_err(num)?;
    let spec = steady_spectrum(p, &EnergyConvention::default()).map_err(num)?;
    let steady = bloch_from_density(&steady_state(p).map_err(num)?);
    let last = traj.states[traj.states.len() - 1];

    let small = if p.ratio() < 0.15 {
        let s = formula_samples(&ledger, &[0.01, 0.02, 0.05, 0.1, 0.15], p.gamma(), |gt| {
            asymptotic_upsilon_small(p, gt)
        });
        (!s.is_empty()).then_some(s)
    } else {
        None
    };
    let strong = if p.ratio() >= 25.0 {
        let s = formula_samples(&ledger, &[0.05, 0.1, 0.2, 0.4], p.omega(), |ot| {
            asymptotic_upsilon_ultralarge(p, ot)
        });
        (!s.is_empty()).then_some(s)
    } else {
        None
    };

    let result = LedgerResult {
        omega_rad_per_s: p.omega(),
        gamma_rad_per_s: p.gamma(),
        drive_decay_ratio: p.ratio(),
        regime: regime_label(classify_regime(p.ratio())),
        bath_convention: convention.as_str(),
        initial: run.initial.label(),
        min_upsilon: min,
        t_star_s: t_star,
        rho22_final: 0.5 * (1.0 + last.z),
        rho22_steady: 0.5 * (1.0 + steady.z),
        ln_population_ratio: spec.ln_population_ratio(),
        beta: spec.beta,
        critical_time_s: critical_time(p).ok(),
        small_drive_samples: small,
        strong_drive_samples: strong,
    };
    let mut lines = vec![format!("min upsilon: {min} at t = {t_star} s")];
    lines.push(format!(
        "rho22 at horizon: {} (steady {})",
        result.rho22_final, result.rho22_steady
    ));
    if let Some(tc) = result.critical_time_s {
        lines.push(format!("critical time: {tc} s"));
    }
    Ok((
        vec![
            ("trajectory.csv", trajectory_csv(&traj)),
            ("ledger.csv", ledger.to_csv()),
        ],
        to_value(&result)?,
        lines,
    ))
}

fn run_sweep(
    initial: &InitialState,
    ratios: &[f64],
    opts: &upsilon_core::ScanOpts,
    bracket: Option<[f64; 2]>,
    with_beta: bool,
) -> Result<ModeOutput, CliError> {
    let rho0 = match initial {
        InitialState::Excited => Density2::excited(),
        InitialState::Bloch(b) => density_from_bloch(b).map_err(num)?,
        InitialState::PreEvolve(_) => unreachable!("rejected by config validation"),
    };
    let sweep = ddr_sweep(&rho0, ratios, opts).map_err(num)?;
    let threshold = bracket
        .map(|[lo, hi]| find_violation_threshold(&rho0, lo, hi, opts))
        .transpose()
        .map_err(num)?;

    let (mut min, mut argmin) = (f64::INFINITY, f64::NAN);
    for (k, &u) in sweep.min_upsilon.iter().enumerate() {
        if u < min {
            min = u;
            argmin = sweep.ratios[k];
        }
    }
    let mut crossings = Vec::new();
    for k in 0..sweep.ratios.len() - 1 {
        let (a, b) = (sweep.min_upsilon[k], sweep.min_upsilon[k + 1]);
        if a.is_finite() && b.is_finite() && (a < VIOLATION_TOL) != (b < VIOLATION_TOL) {
            crossings.push((sweep.ratios[k] * sweep.ratios[k + 1]).sqrt());
        }
    }
    let beta_series = if with_beta {
        let mut series = BetaSeries {
            ratios: ratios.to_vec(),
            ln_population_ratio: Vec::with_capacity(ratios.len()),
            delta_e: Vec::with_capacity(ratios.len()),
            beta: Vec::with_capacity(ratios.len()),
        };
        for &r in ratios {
            let p = SystemParams2::new(r, 1.0).map_err(num)?;
            let spec = steady_spectrum(&p, &EnergyConvention::default()).map_err(num)?;
            series.ln_population_ratio.push(spec.ln_population_ratio());
            series.delta_e.push(spec.delta_e);
            series.beta.push(spec.beta);
        }
        Some(series)
    } else {
        None
    };

    let result = SweepSummary {
        initial: initial.label(),
        ratio_min: ratios[0],
        ratio_max: *ratios.last().unwrap(),
        points: ratios.len(),
        min_upsilon: min,
        argmin_ratio: argmin,
        threshold_ratio: threshold,
        sign_change_ratios: crossings,
        beta_series,
    };
    let mut lines = vec![format!(
        "min upsilon over sweep: {min} at ratio {argmin}"
    )];
    if let Some(th) = threshold {
        lines.push(format!("violation threshold ratio: {th}"));
    }
    Ok((
        vec![("sweep.csv", sweep.to_csv())],
        to_value(&result)?,
        lines,
    ))
}

fn run_bloch_scan(
    params: &SystemParams2,
    z_grid: &[f64],
    r_grid: &[f64],
    opts: &upsilon_core::ScanOpts,
) -> Result<ModeOutput, CliError> {
    let map = bloch_grid_scan(params, z_grid, r_grid, opts).map_err(num)?;
    let mut valid = 0usize;
    let mut violations = 0usize;
    let mut min = f64::INFINITY;
    for row in &map.min_upsilon {
        for &u in row {
            if u.is_finite() {
                valid += 1;
                if u < VIOLATION_TOL {
                    violations += 1;
                }
                if u < min {
                    min = u;
                }
            }
        }
    }
    let result = ScanSummary {
        omega_rad_per_s: params.omega(),
        gamma_rad_per_s: params.gamma(),
        drive_decay_ratio: params.ratio(),
        z_count: z_grid.len(),
        r_count: r_grid.len(),
        valid_cells: valid,
        violation_cells: violations,
        min_over_grid: min,
        contour_points: map.zero_contour.len(),
    };
    let lines = vec![
        format!("violation cells: {violations} of {valid} valid"),
        format!("min upsilon over grid: {min}"),
    ];
    Ok((
        vec![
            ("heatmap.csv", map.to_csv()),
            ("heatmap.json", map.to_json().map_err(num)?),
        ],
        to_value(&result)?,
        lines,
    ))
}

fn run_ladder(
    params: &ThreeLevelParams,
    level: usize,
    horizon: f64,
    points: usize,
    deviation: bool,
) -> Result<ModeOutput, CliError> {
    let times = linspace(horizon, points);
    let traj = evolve3(params, &Density3::basis_state(level), &times).map_err(num)?;
    let steady = steady3(params).map_err(num)?;
    let mut csv = String::from("t,p11,p22,p33\n");
    for (k, rho) in traj.states.iter().enumerate() {
        let [p1, p2, p3] = rho.populations();
        csv.push_str(&format!("{},{},{},{}\n", times[k], p1, p2, p3));
    }
    let mut files = vec![("trajectory3.csv", csv)];

    let mut deviation_final = None;
    if deviation {
        let eps3 = steady_deviation3(&traj).map_err(num)?;
        let gamma_eff = params.gamma_eff().map_err(num)?;
        let p2 = SystemParams2::new(params.omega(), gamma_eff).map_err(num)?;
        let rho20 = if level == 1 {
            Density2::excited()
        } else {
            Density2::ground()
        };
        let traj2 = evolve(&p2, &rho20, &times).map_err(num)?;
        let eps2 = steady_deviation2(&traj2).map_err(num)?;
        let mut dev = String::from("t,eps_ladder,eps_reduced\n");
        for k in 0..times.len() {
            dev.push_str(&format!("{},{},{}\n", times[k], eps3[k], eps2[k]));
        }
        files.push(("deviation.csv", dev));
        deviation_final = Some(DeviationFinal {
            ladder: eps3[eps3.len() - 1],
            reduced: eps2[eps2.len() - 1],
        });
    }

    let reduction = effective_reduction(params).ok().map(|r| ReductionInfo {
        leak_r: r.r,
        xi: r.xi,
        beta_tilde: r.beta_tilde,
        lambda_tilde_minus: r.lambda_tilde_minus,
        lambda_tilde_plus: r.lambda_tilde_plus,
    });
    let result = LadderResult {
        omega_rad_per_s: params.omega(),
        omega_tilde_rad_per_s: params.omega_tilde(),
        gamma_e_rad_per_s: params.gamma_e(),
        gamma_eff_rad_per_s: params.gamma_eff().ok(),
        valid_reduction: params.valid_reduction(),
        initial_level: level,
        steady_populations: steady.populations(),
        final_populations: traj.states[traj.states.len() - 1].populations(),
        reduction,
        deviation_final,
    };
    let pops = result.steady_populations;
    let mut lines = vec![format!(
        "steady populations: {}, {}, {}",
        pops[0], pops[1], pops[2]
    )];
    if let Some(d) = &result.deviation_final {
        lines.push(format!(
            "distance to stationarity at horizon: ladder {}, reduced {}",
            d.ladder, d.reduced
        ));
    }
    Ok((files, to_value(&result)?, lines))
}

fn run_reduction_scan(geg: f64, ratios: &[f64]) -> Result<ModeOutput, CliError> {
    let mut csv =
        String::from("ratio,xi,beta_tilde,beta_two_level,lambda_tilde_minus,lambda_tilde_plus\n");
    for &ddr in ratios {
        let p = ThreeLevelParams::new(ddr, geg.sqrt(), geg).map_err(num)?;
        let red = effective_reduction(&p).map_err(num)?;
        let bare = tilde_spectrum(1.0, ddr, 0.0).map_err(num)?;
        csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            ddr, red.xi, red.beta_tilde, bare.beta, red.lambda_tilde_minus, red.lambda_tilde_plus
        ));
    }
    let result = ReductionScanSummary {
        gamma_e_over_gamma: geg,
        leak_r: 1.0 / geg,
        points: ratios.len(),
    };
    let lines = vec![format!(
        "reduction scan: {} ratios at leakage fraction {}",
        ratios.len(),
        result.leak_r
    )];
    Ok((vec![("reduction.csv", csv)], to_value(&result)?, lines))
}

fn run_fit_decay(params: &ThreeLevelParams) -> Result<ModeOutput, CliError> {
    let gamma_e = params.gamma_e();
    let omega_tilde = params.omega_tilde();
    let window_hi = 0.5 * gamma_e / (omega_tilde * omega_tilde);
    let window_lo = 5.0 / gamma_e;
    let times = linspace(1.3 * window_hi, 601);
    let traj = evolve3(params, &Density3::basis_state(1), &times).map_err(num)?;
    let fitted = fit_effective_decay(&traj).map_err(num)?;
    let formula = params.gamma_eff().map_err(num)?;

    let mut window = Vec::new();
    for (k, rho) in traj.states.iter().enumerate() {
        let p22 = rho.populations()[1];
        if times[k] >= window_lo && times[k] <= window_hi && p22 > 0.0 {
            window.push((times[k], p22.ln()));
        }
    }
    let n = window.len() as f64;
    let t_bar = window.iter().map(|w| w.0).sum::<f64>() / n;
    let l_bar = window.iter().map(|w| w.1).sum::<f64>() / n;
    let mut csv = String::from("t,p22,p22_fit\n");
    for (k, rho) in traj.states.iter().enumerate() {
        let fit = (l_bar - fitted * (times[k] - t_bar)).exp();
        csv.push_str(&format!("{},{},{}\n", times[k], rho.populations()[1], fit));
    }

    let result = FitResult {
        omega_tilde_rad_per_s: omega_tilde,
        gamma_e_rad_per_s: gamma_e,
        gamma_eff_formula: formula,
        gamma_eff_fit: fitted,
        relative_error: (fitted - formula).abs() / formula,
        window_lo_s: window_lo,
        window_hi_s: window_hi,
        window_samples: window.len(),
    };
    let lines = vec![format!(
        "fitted gamma_eff: {fitted} rad/s (formula {formula}, relative error {})",
        result.relative_error
    )];
    Ok((vec![("fit.csv", csv)], to_value(&result)?, lines))
}

fn run_noise(
    run: &TwoLevelRun,
    points: usize,
    n_shots: u64,
    eps_exp: f64,
    seed: u64,
) -> Result<ModeOutput, CliError> {
    let times = linspace(run.horizon, points);
    let traj = two_level_trajectory(run, &times)?;
    let model = NoiseModel::new(n_shots, eps_exp).map_err(num)?;
    let noisy = simulate_shots(&traj, &model, seed).map_err(num)?;

    let curve_points = 201usize;
    let lo: f64 = 1e-4;
    let hi: f64 = 0.5;
    let step = (hi / lo).powf(1.0 / (curve_points - 1) as f64);
    let mut curves = String::from("p,stat_error,floor\n");
    for i in 0..curve_points {
        let p = lo * step.powi(i as i32);
        let stat = entropy_error(p, n_shots).map_err(num)?;
        let floor = entropy_error_floor(p, n_shots, eps_exp).map_err(num)?;
        curves.push_str(&format!("{p},{stat},{floor}\n"));
    }
    let floor_ref = entropy_error_floor(1e-3, n_shots, eps_exp).map_err(num)?;

    let result = NoiseSummary {
        omega_rad_per_s: run.params.omega(),
        gamma_rad_per_s: run.params.gamma(),
        n_shots,
        eps_exp,
        seed,
        floor_at_pg_1e3: floor_ref,
        curve_points,
    };
    let lines = vec![format!(
        "entropy error floor at p_g = 1e-3: {floor_ref} ({n_shots} shots, eps_exp {eps_exp})"
    )];
    Ok((
        vec![
            ("trajectory.csv", trajectory_csv(&traj)),
            ("noisy_trajectory.csv", noisy.to_csv()),
            ("noise_curves.csv", curves),
        ],
        to_value(&result)?,
        lines,
    ))
}

/// Executes a validated scenario, writing artifacts under `out`.
pub fn run_scenario(cfg: &ScenarioConfig, out: &Path, seed: u64) -> Result<RunOutcome, CliError> {
    std::fs::create_dir_all(out).map_err(|e| io(out, e))?;

    let (files, result, lines) = match &cfg.scenario {
        Scenario::Evolve { run, points } => run_evolve(run, *points)?,
        Scenario::Ledger {
            run,
            per_scale,
            convention,
        } => run_ledger(run, *per_scale, *convention)?,
        Scenario::DdrSweep {
            initial,
            ratios,
            opts,
            bracket,
            beta_series,
        } => run_sweep(initial, ratios, opts, *bracket, *beta_series)?,
        Scenario::BlochScan {
            params,
            z_grid,
            r_grid,
            opts,
        } => run_bloch_scan(params, z_grid, r_grid, opts)?,
        Scenario::Ladder {
            params,
            initial_level,
            horizon,
            points,
            deviation,
        } => run_ladder(params, *initial_level, *horizon, *points, *deviation)?,
        Scenario::ReductionScan {
            gamma_e_over_gamma,
            ratios,
        } => run_reduction_scan(*gamma_e_over_gamma, ratios)?,
        Scenario::FitDecay { params } => run_fit_decay(params)?,
        Scenario::Noise {
            run,
            points,
            n_shots,
            eps_exp,
        } => run_noise(run, *points, *n_shots, *eps_exp, seed)?,
    };

    let mut names: Vec<String> = files.iter().map(|(n, _)| n.to_string()).collect();
    names.push("summary.json".into());
    let summary = Summary {
        mode: cfg.mode.as_str(),
        seed,
        artifacts: &names,
        result,
    };
    let mut json = serde_json::to_string_pretty(&summary)
        .map_err(|e| CliError::Numerics(format!("serialising summary: {e}")))?;
    json.push('\n');

    let mut artifacts = Vec::with_capacity(files.len() + 1);
    for (name, content) in files.into_iter().chain([("summary.json", json)]) {
        let path = out.join(name);
        std::fs::write(&path, content).map_err(|e| io(&path, e))?;
        artifacts.push(path);
    }
    Ok(RunOutcome { artifacts, lines })
}
