//! Scenario configuration: a flat TOML document with explicit unit
//! suffixes on every rate key, parsed into a typed [`Scenario`].
//!
//! Rates carry their unit in the key name (`*_rad_per_s` or
//! `*_hz_over_2pi`, the latter multiplied by 2 pi on load); exactly one
//! spelling per rate is accepted and none has a default. Grid knobs
//! (`samples_per_scale`, `trajectory_points`, `horizon_factor`) do have
//! documented defaults.

use std::f64::consts::TAU;
use std::path::PathBuf;

use serde::Deserialize;
use upsilon_core::{BathConvention, BlochVector, ScanOpts, SystemParams2, ThreeLevelParams};

use crate::CliError;

/// Raw key set of the config document. Every key is optional except
/// `mode`; which ones are required or forbidden depends on the mode.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    mode: String,

    omega_rad_per_s: Option<f64>,
    omega_hz_over_2pi: Option<f64>,
    gamma_rad_per_s: Option<f64>,
    gamma_hz_over_2pi: Option<f64>,
    omega_tilde_rad_per_s: Option<f64>,
    omega_tilde_hz_over_2pi: Option<f64>,
    gamma_e_rad_per_s: Option<f64>,
    gamma_e_hz_over_2pi: Option<f64>,

    initial_excited: Option<bool>,
    initial_bloch: Option<[f64; 3]>,
    initial_pre_evolve_us: Option<f64>,
    initial_level: Option<usize>,

    horizon_us: Option<f64>,
    horizon_over_gamma: Option<f64>,
    horizon_factor: Option<f64>,
    samples_per_scale: Option<usize>,
    trajectory_points: Option<usize>,
    bath_convention: Option<String>,

    ratio_min: Option<f64>,
    ratio_max: Option<f64>,
    ratio_points: Option<usize>,
    threshold_bracket: Option<[f64; 2]>,
    beta_series: Option<bool>,

    z_min: Option<f64>,
    z_max: Option<f64>,
    z_count: Option<usize>,
    r_min: Option<f64>,
    r_max: Option<f64>,
    r_count: Option<usize>,

    reduction_scan: Option<bool>,
    gamma_e_over_gamma: Option<f64>,
    deviation: Option<bool>,

    n_shots: Option<u64>,
    eps_exp: Option<f64>,

    seed: Option<u64>,
    out_dir: Option<String>,
}

/// Scenario dispatch modes, one per batch workload.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Evolve,
    Ledger,
    DdrSweep,
    BlochScan,
    ThreeLevel,
    FitDecay,
    Noise,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Evolve => "evolve",
            Mode::Ledger => "ledger",
            Mode::DdrSweep => "ddr-sweep",
            Mode::BlochScan => "bloch-scan",
            Mode::ThreeLevel => "three-level",
            Mode::FitDecay => "fit-decay",
            Mode::Noise => "noise",
        }
    }

    fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "evolve" => Ok(Mode::Evolve),
            "ledger" => Ok(Mode::Ledger),
            "ddr-sweep" => Ok(Mode::DdrSweep),
            "bloch-scan" => Ok(Mode::BlochScan),
            "three-level" => Ok(Mode::ThreeLevel),
            "fit-decay" => Ok(Mode::FitDecay),
            "noise" => Ok(Mode::Noise),
            other => Err(CliError::Config(format!(
                "unknown mode \"{other}\"; expected one of evolve, ledger, \
                 ddr-sweep, bloch-scan, three-level, fit-decay, noise"
            ))),
        }
    }
}

/// Initial state of a two-level run, resolved to a density matrix only
/// when the scenario executes.
#[derive(Debug, Clone)]
pub enum InitialState {
    Excited,
    Bloch(BlochVector),
    /// Evolve the excited state for this long (seconds) first.
    PreEvolve(f64),
}

impl InitialState {
    pub fn label(&self) -> String {
        match self {
            InitialState::Excited => "excited".into(),
            InitialState::Bloch(b) => format!("bloch({}, {}, {})", b.x, b.y, b.z),
            InitialState::PreEvolve(tau) => format!("pre-evolve({tau} s)"),
        }
    }
}

/// A two-level evolution job: rates, initial state and time horizon.
#[derive(Debug, Clone)]
pub struct TwoLevelRun {
    pub params: SystemParams2,
    pub initial: InitialState,
    /// Horizon in seconds.
    pub horizon: f64,
}

/// A fully validated scenario, ready to execute.
#[derive(Debug, Clone)]
pub enum Scenario {
    Evolve {
        run: TwoLevelRun,
        points: usize,
    },
    Ledger {
        run: TwoLevelRun,
        per_scale: usize,
        convention: BathConvention,
    },
    DdrSweep {
        initial: InitialState,
        ratios: Vec<f64>,
        opts: ScanOpts,
        bracket: Option<[f64; 2]>,
        beta_series: bool,
    },
    BlochScan {
        params: SystemParams2,
        z_grid: Vec<f64>,
        r_grid: Vec<f64>,
        opts: ScanOpts,
    },
    Ladder {
        params: ThreeLevelParams,
        initial_level: usize,
        horizon: f64,
        points: usize,
        deviation: bool,
    },
    ReductionScan {
        gamma_e_over_gamma: f64,
        ratios: Vec<f64>,
    },
    FitDecay {
        params: ThreeLevelParams,
    },
    Noise {
        run: TwoLevelRun,
        points: usize,
        n_shots: u64,
        eps_exp: f64,
    },
}

/// A parsed config document: the scenario plus run-level settings.
#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    pub mode: Mode,
    pub scenario: Scenario,
    pub seed: u64,
    pub out_dir: Option<PathBuf>,
}

fn cfg(msg: String) -> CliError {
    CliError::Config(msg)
}

/// Resolves a rate from its two unit spellings; errors unless exactly
/// one is present.
fn rate(name: &str, rad: Option<f64>, hz: Option<f64>) -> Result<f64, CliError> {
    match (rad, hz) {
        (Some(v), None) => Ok(v),
        (None, Some(v)) => Ok(TAU * v),
        (None, None) => Err(cfg(format!(
            "missing rate \"{name}\": set {name}_rad_per_s or {name}_hz_over_2pi"
        ))),
        (Some(_), Some(_)) => Err(cfg(format!(
            "rate \"{name}\" given in both unit spellings; keep exactly one"
        ))),
    }
}

fn forbid<T>(v: &Option<T>, key: &str, mode: Mode) -> Result<(), CliError> {
    if v.is_some() {
        return Err(cfg(format!(
            "key \"{key}\" does not apply to mode \"{}\"",
            mode.as_str()
        )));
    }
    Ok(())
}

fn core_err(e: upsilon_core::Error) -> CliError {
    cfg(e.to_string())
}

impl RawConfig {
    fn two_level_params(&self) -> Result<SystemParams2, CliError> {
        let omega = rate("omega", self.omega_rad_per_s, self.omega_hz_over_2pi)?;
        let gamma = rate("gamma", self.gamma_rad_per_s, self.gamma_hz_over_2pi)?;
        SystemParams2::new(omega, gamma).map_err(core_err)
    }

    fn three_level_params(&self) -> Result<ThreeLevelParams, CliError> {
        let omega = rate("omega", self.omega_rad_per_s, self.omega_hz_over_2pi)?;
        let omega_tilde = rate(
            "omega_tilde",
            self.omega_tilde_rad_per_s,
            self.omega_tilde_hz_over_2pi,
        )?;
        let gamma_e = rate("gamma_e", self.gamma_e_rad_per_s, self.gamma_e_hz_over_2pi)?;
        ThreeLevelParams::new(omega, omega_tilde, gamma_e).map_err(core_err)
    }

    fn initial_state(&self, mode: Mode) -> Result<InitialState, CliError> {
        let mut given = Vec::new();
        if self.initial_excited.is_some() {
            given.push("initial_excited");
        }
        if self.initial_bloch.is_some() {
            given.push("initial_bloch");
        }
        if self.initial_pre_evolve_us.is_some() {
            given.push("initial_pre_evolve_us");
        }
        if given.len() != 1 {
            return Err(cfg(format!(
                "mode \"{}\" needs exactly one initial-state key \
                 (initial_excited, initial_bloch or initial_pre_evolve_us), got {}",
                mode.as_str(),
                given.len()
            )));
        }
        if let Some(flag) = self.initial_excited {
            if !flag {
                return Err(cfg(
                    "initial_excited = false says nothing; set it to true or \
                     use another initial-state key"
                        .into(),
                ));
            }
            return Ok(InitialState::Excited);
        }
        if let Some([x, y, z]) = self.initial_bloch {
            let b = BlochVector::new(x, y, z).map_err(core_err)?;
            return Ok(InitialState::Bloch(b));
        }
        let tau_us = self.initial_pre_evolve_us.unwrap();
        if !tau_us.is_finite() || tau_us < 0.0 {
            return Err(cfg(format!(
                "initial_pre_evolve_us must be finite and nonnegative, got {tau_us}"
            )));
        }
        Ok(InitialState::PreEvolve(tau_us * 1e-6))
    }

    /// Horizon in seconds from `horizon_us` or `horizon_over_gamma`
    /// (multiples of `1/gamma`); exactly one required.
    fn horizon(&self, gamma: f64) -> Result<f64, CliError> {
        let h = match (self.horizon_us, self.horizon_over_gamma) {
            (Some(us), None) => us * 1e-6,
            (None, Some(f)) => f / gamma,
            (None, None) => {
                return Err(cfg(
                    "missing horizon: set horizon_us or horizon_over_gamma".into(),
                ))
            }
            (Some(_), Some(_)) => {
                return Err(cfg(
                    "horizon given as both horizon_us and horizon_over_gamma; \
                     keep exactly one"
                        .into(),
                ))
            }
        };
        if !h.is_finite() || h <= 0.0 {
            return Err(cfg(format!("horizon must be positive and finite, got {h} s")));
        }
        Ok(h)
    }

    /// Horizon in seconds from `horizon_us` only (modes without a
    /// two-level decay rate to scale against).
    fn horizon_us_only(&self, mode: Mode) -> Result<f64, CliError> {
        forbid(&self.horizon_over_gamma, "horizon_over_gamma", mode)?;
        let us = self
            .horizon_us
            .ok_or_else(|| cfg("missing horizon: set horizon_us".into()))?;
        let h = us * 1e-6;
        if !h.is_finite() || h <= 0.0 {
            return Err(cfg(format!("horizon must be positive and finite, got {h} s")));
        }
        Ok(h)
    }

    fn points(&self) -> Result<usize, CliError> {
        let n = self.trajectory_points.unwrap_or(401);
        if n < 2 {
            return Err(cfg(format!(
                "trajectory_points must be at least 2, got {n}"
            )));
        }
        Ok(n)
    }

    fn per_scale(&self) -> Result<usize, CliError> {
        let n = self.samples_per_scale.unwrap_or(400);
        if n < 1 {
            return Err(cfg("samples_per_scale must be at least 1".into()));
        }
        Ok(n)
    }

    fn scan_opts(&self) -> Result<ScanOpts, CliError> {
        let mut opts = ScanOpts::default();
        if let Some(f) = self.horizon_factor {
            if !f.is_finite() || f <= 0.0 {
                return Err(cfg(format!(
                    "horizon_factor must be positive and finite, got {f}"
                )));
            }
            opts.horizon_factor = f;
        }
        opts.per_scale = self.per_scale()?;
        Ok(opts)
    }

    fn convention(&self) -> Result<BathConvention, CliError> {
        match self.bath_convention.as_deref() {
            None => Ok(BathConvention::default()),
            Some("effective-basis") => Ok(BathConvention::EffectiveBasis),
            Some("bare-eigen-energy") => Ok(BathConvention::BareEigenEnergy),
            Some(other) => Err(cfg(format!(
                "unknown bath_convention \"{other}\"; expected \
                 \"effective-basis\" or \"bare-eigen-energy\""
            ))),
        }
    }

    /// Log-spaced ratio axis from `ratio_min`, `ratio_max`,
    /// `ratio_points`; all three required.
    fn ratio_axis(&self) -> Result<Vec<f64>, CliError> {
        let (lo, hi, n) = match (self.ratio_min, self.ratio_max, self.ratio_points) {
            (Some(lo), Some(hi), Some(n)) => (lo, hi, n),
            _ => {
                return Err(cfg(
                    "ratio axis needs ratio_min, ratio_max and ratio_points".into(),
                ))
            }
        };
        if !(lo.is_finite() && hi.is_finite()) || lo <= 0.0 || hi <= lo {
            return Err(cfg(format!(
                "ratio axis needs finite 0 < ratio_min < ratio_max, got [{lo}, {hi}]"
            )));
        }
        if n < 2 {
            return Err(cfg(format!("ratio_points must be at least 2, got {n}")));
        }
        let step = (hi / lo).powf(1.0 / (n - 1) as f64);
        Ok((0..n).map(|i| lo * step.powi(i as i32)).collect())
    }

    fn linear_grid(
        &self,
        name: &str,
        lo: Option<f64>,
        hi: Option<f64>,
        count: Option<usize>,
        range: (f64, f64),
    ) -> Result<Vec<f64>, CliError> {
        let (lo, hi, n) = match (lo, hi, count) {
            (Some(lo), Some(hi), Some(n)) => (lo, hi, n),
            _ => {
                return Err(cfg(format!(
                    "{name} grid needs {name}_min, {name}_max and {name}_count"
                )))
            }
        };
        if !(lo.is_finite() && hi.is_finite()) || hi <= lo {
            return Err(cfg(format!(
                "{name} grid needs finite {name}_min < {name}_max, got [{lo}, {hi}]"
            )));
        }
        if lo < range.0 || hi > range.1 {
            return Err(cfg(format!(
                "{name} grid must stay inside [{}, {}], got [{lo}, {hi}]",
                range.0, range.1
            )));
        }
        if n < 2 {
            return Err(cfg(format!("{name}_count must be at least 2, got {n}")));
        }
        Ok((0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect())
    }

    fn no_three_level_rates(&self, mode: Mode) -> Result<(), CliError> {
        forbid(&self.omega_tilde_rad_per_s, "omega_tilde_rad_per_s", mode)?;
        forbid(&self.omega_tilde_hz_over_2pi, "omega_tilde_hz_over_2pi", mode)?;
        forbid(&self.gamma_e_rad_per_s, "gamma_e_rad_per_s", mode)?;
        forbid(&self.gamma_e_hz_over_2pi, "gamma_e_hz_over_2pi", mode)?;
        forbid(&self.initial_level, "initial_level", mode)?;
        forbid(&self.deviation, "deviation", mode)?;
        forbid(&self.reduction_scan, "reduction_scan", mode)?;
        forbid(&self.gamma_e_over_gamma, "gamma_e_over_gamma", mode)?;
        Ok(())
    }

    fn no_two_level_rates(&self, mode: Mode) -> Result<(), CliError> {
        forbid(&self.omega_rad_per_s, "omega_rad_per_s", mode)?;
        forbid(&self.omega_hz_over_2pi, "omega_hz_over_2pi", mode)?;
        forbid(&self.gamma_rad_per_s, "gamma_rad_per_s", mode)?;
        forbid(&self.gamma_hz_over_2pi, "gamma_hz_over_2pi", mode)?;
        Ok(())
    }

    fn no_initial(&self, mode: Mode) -> Result<(), CliError> {
        forbid(&self.initial_excited, "initial_excited", mode)?;
        forbid(&self.initial_bloch, "initial_bloch", mode)?;
        forbid(&self.initial_pre_evolve_us, "initial_pre_evolve_us", mode)?;
        Ok(())
    }

    fn no_horizon(&self, mode: Mode) -> Result<(), CliError> {
        forbid(&self.horizon_us, "horizon_us", mode)?;
        forbid(&self.horizon_over_gamma, "horizon_over_gamma", mode)?;
        Ok(())
    }

    fn no_ratio_axis(&self, mode: Mode) -> Result<(), CliError> {
        forbid(&self.ratio_min, "ratio_min", mode)?;
        forbid(&self.ratio_max, "ratio_max", mode)?;
        forbid(&self.ratio_points, "ratio_points", mode)?;
        forbid(&self.threshold_bracket, "threshold_bracket", mode)?;
        forbid(&self.beta_series, "beta_series", mode)?;
        Ok(())
    }

    fn no_bloch_grid(&self, mode: Mode) -> Result<(), CliError> {
        forbid(&self.z_min, "z_min", mode)?;
        forbid(&self.z_max, "z_max", mode)?;
        forbid(&self.z_count, "z_count", mode)?;
        forbid(&self.r_min, "r_min", mode)?;
        forbid(&self.r_max, "r_max", mode)?;
        forbid(&self.r_count, "r_count", mode)?;
        Ok(())
    }

    fn no_noise(&self, mode: Mode) -> Result<(), CliError> {
        forbid(&self.n_shots, "n_shots", mode)?;
        forbid(&self.eps_exp, "eps_exp", mode)?;
        Ok(())
    }

    fn no_scan_opts(&self, mode: Mode) -> Result<(), CliError> {
        forbid(&self.horizon_factor, "horizon_factor", mode)
    }
}

/// Parses and validates a config document.
pub fn parse_config(text: &str) -> Result<ScenarioConfig, CliError> {
    let raw: RawConfig =
        toml::from_str(text).map_err(|e| cfg(format!("cannot parse config: {e}")))?;
    let mode = Mode::parse(&raw.mode)?;

    let scenario = match mode {
        Mode::Evolve => {
            raw.no_three_level_rates(mode)?;
            raw.no_scan_opts(mode)?;
            raw.no_ratio_axis(mode)?;
            raw.no_bloch_grid(mode)?;
            raw.no_noise(mode)?;
            forbid(&raw.samples_per_scale, "samples_per_scale", mode)?;
            forbid(&raw.bath_convention, "bath_convention", mode)?;
            let params = raw.two_level_params()?;
            Scenario::Evolve {
                run: TwoLevelRun {
                    params,
                    initial: raw.initial_state(mode)?,
                    horizon: raw.horizon(params.gamma())?,
                },
                points: raw.points()?,
            }
        }
        Mode::Ledger => {
            raw.no_three_level_rates(mode)?;
            raw.no_scan_opts(mode)?;
            raw.no_ratio_axis(mode)?;
            raw.no_bloch_grid(mode)?;
            raw.no_noise(mode)?;
            forbid(&raw.trajectory_points, "trajectory_points", mode)?;
            let params = raw.two_level_params()?;
            Scenario::Ledger {
                run: TwoLevelRun {
                    params,
                    initial: raw.initial_state(mode)?,
                    horizon: raw.horizon(params.gamma())?,
                },
                per_scale: raw.per_scale()?,
                convention: raw.convention()?,
            }
        }
        Mode::DdrSweep => {
            raw.no_two_level_rates(mode)?;
            raw.no_three_level_rates(mode)?;
            raw.no_bloch_grid(mode)?;
            raw.no_noise(mode)?;
            raw.no_horizon(mode)?;
            forbid(&raw.trajectory_points, "trajectory_points", mode)?;
            forbid(&raw.bath_convention, "bath_convention", mode)?;
            let initial = raw.initial_state(mode)?;
            if matches!(initial, InitialState::PreEvolve(_)) {
                return Err(cfg(
                    "ddr-sweep normalises gamma to 1, so initial_pre_evolve_us \
                     is ambiguous; give initial_excited or initial_bloch"
                        .into(),
                ));
            }
            if let Some([lo, hi]) = raw.threshold_bracket {
                if !(lo.is_finite() && hi.is_finite()) || lo <= 0.0 || hi <= lo {
                    return Err(cfg(format!(
                        "threshold_bracket needs finite 0 < lo < hi, got [{lo}, {hi}]"
                    )));
                }
            }
            Scenario::DdrSweep {
                initial,
                ratios: raw.ratio_axis()?,
                opts: raw.scan_opts()?,
                bracket: raw.threshold_bracket,
                beta_series: raw.beta_series.unwrap_or(false),
            }
        }
        Mode::BlochScan => {
            raw.no_three_level_rates(mode)?;
            raw.no_ratio_axis(mode)?;
            raw.no_noise(mode)?;
            raw.no_initial(mode)?;
            raw.no_horizon(mode)?;
            forbid(&raw.trajectory_points, "trajectory_points", mode)?;
            forbid(&raw.bath_convention, "bath_convention", mode)?;
            Scenario::BlochScan {
                params: raw.two_level_params()?,
                z_grid: raw.linear_grid("z", raw.z_min, raw.z_max, raw.z_count, (-1.0, 1.0))?,
                r_grid: raw.linear_grid("r", raw.r_min, raw.r_max, raw.r_count, (0.0, 1.0))?,
                opts: raw.scan_opts()?,
            }
        }
        Mode::ThreeLevel if raw.reduction_scan == Some(true) => {
            raw.no_two_level_rates(mode)?;
            raw.no_bloch_grid(mode)?;
            raw.no_noise(mode)?;
            raw.no_initial(mode)?;
            raw.no_horizon(mode)?;
            forbid(&raw.omega_tilde_rad_per_s, "omega_tilde_rad_per_s", mode)?;
            forbid(&raw.omega_tilde_hz_over_2pi, "omega_tilde_hz_over_2pi", mode)?;
            forbid(&raw.gamma_e_rad_per_s, "gamma_e_rad_per_s", mode)?;
            forbid(&raw.gamma_e_hz_over_2pi, "gamma_e_hz_over_2pi", mode)?;
            forbid(&raw.initial_level, "initial_level", mode)?;
            forbid(&raw.deviation, "deviation", mode)?;
            forbid(&raw.threshold_bracket, "threshold_bracket", mode)?;
            forbid(&raw.beta_series, "beta_series", mode)?;
            forbid(&raw.trajectory_points, "trajectory_points", mode)?;
            forbid(&raw.samples_per_scale, "samples_per_scale", mode)?;
            forbid(&raw.bath_convention, "bath_convention", mode)?;
            raw.no_scan_opts(mode)?;
            let geg = raw.gamma_e_over_gamma.ok_or_else(|| {
                cfg("reduction_scan needs gamma_e_over_gamma".into())
            })?;
            if !geg.is_finite() || geg <= 1.0 {
                return Err(cfg(format!(
                    "gamma_e_over_gamma must be finite and greater than 1, got {geg}"
                )));
            }
            Scenario::ReductionScan {
                gamma_e_over_gamma: geg,
                ratios: raw.ratio_axis()?,
            }
        }
        Mode::ThreeLevel => {
            raw.no_ratio_axis(mode)?;
            raw.no_scan_opts(mode)?;
            raw.no_bloch_grid(mode)?;
            raw.no_noise(mode)?;
            raw.no_initial(mode)?;
            forbid(&raw.reduction_scan, "reduction_scan", mode)?;
            forbid(&raw.gamma_e_over_gamma, "gamma_e_over_gamma", mode)?;
            forbid(&raw.gamma_rad_per_s, "gamma_rad_per_s", mode)?;
            forbid(&raw.gamma_hz_over_2pi, "gamma_hz_over_2pi", mode)?;
            forbid(&raw.bath_convention, "bath_convention", mode)?;
            forbid(&raw.samples_per_scale, "samples_per_scale", mode)?;
            let params = raw.three_level_params()?;
            let level = raw
                .initial_level
                .ok_or_else(|| cfg("three-level evolution needs initial_level (0, 1 or 2)".into()))?;
            if level > 2 {
                return Err(cfg(format!(
                    "initial_level must be 0, 1 or 2, got {level}"
                )));
            }
            let deviation = raw.deviation.unwrap_or(false);
            if deviation && level == 2 {
                return Err(cfg(
                    "deviation = true compares against the reduced two-level \
                     system, which has no counterpart of level 2; start from \
                     level 0 or 1"
                        .into(),
                ));
            }
            Scenario::Ladder {
                params,
                initial_level: level,
                horizon: raw.horizon_us_only(mode)?,
                points: raw.points()?,
                deviation,
            }
        }
        Mode::FitDecay => {
            raw.no_ratio_axis(mode)?;
            raw.no_scan_opts(mode)?;
            raw.no_bloch_grid(mode)?;
            raw.no_noise(mode)?;
            raw.no_initial(mode)?;
            raw.no_horizon(mode)?;
            forbid(&raw.gamma_rad_per_s, "gamma_rad_per_s", mode)?;
            forbid(&raw.gamma_hz_over_2pi, "gamma_hz_over_2pi", mode)?;
            forbid(&raw.initial_level, "initial_level", mode)?;
            forbid(&raw.deviation, "deviation", mode)?;
            forbid(&raw.reduction_scan, "reduction_scan", mode)?;
            forbid(&raw.gamma_e_over_gamma, "gamma_e_over_gamma", mode)?;
            forbid(&raw.trajectory_points, "trajectory_points", mode)?;
            forbid(&raw.samples_per_scale, "samples_per_scale", mode)?;
            forbid(&raw.bath_convention, "bath_convention", mode)?;
            let params = raw.three_level_params()?;
            if params.omega() != 0.0 {
                return Err(cfg(format!(
                    "fit-decay needs an undriven ladder: set omega to exactly 0, \
                     got {} rad/s",
                    params.omega()
                )));
            }
            Scenario::FitDecay { params }
        }
        Mode::Noise => {
            raw.no_three_level_rates(mode)?;
            raw.no_scan_opts(mode)?;
            raw.no_ratio_axis(mode)?;
            raw.no_bloch_grid(mode)?;
            forbid(&raw.samples_per_scale, "samples_per_scale", mode)?;
            forbid(&raw.bath_convention, "bath_convention", mode)?;
            let params = raw.two_level_params()?;
            let n_shots = raw
                .n_shots
                .ok_or_else(|| cfg("noise mode needs n_shots".into()))?;
            let eps_exp = raw
                .eps_exp
                .ok_or_else(|| cfg("noise mode needs eps_exp".into()))?;
            upsilon_core::NoiseModel::new(n_shots, eps_exp).map_err(core_err)?;
            Scenario::Noise {
                run: TwoLevelRun {
                    params,
                    initial: raw.initial_state(mode)?,
                    horizon: raw.horizon(params.gamma())?,
                },
                points: raw.points()?,
                n_shots,
                eps_exp,
            }
        }
    };

    Ok(ScenarioConfig {
        mode,
        scenario,
        seed: raw.seed.unwrap_or(0),
        out_dir: raw.out_dir.map(PathBuf::from),
    })
}
