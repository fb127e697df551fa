//! The three-level ladder realising the driven two-level emitter.
//!
//! Levels 1 and 2 are coupled by a drive at angular rate `omega`, levels 2
//! and 3 by a stronger coupling `omega_tilde`, and level 3 decays to level
//! 1 at `gamma_e`. When `gamma_e >> omega_tilde >> omega` the 2-3-1 path
//! acts as an engineered decay channel for level 2 at the effective rate
//! `gamma_eff = omega_tilde^2 / gamma_e`, reproducing the two-level
//! dynamics up to corrections of order `r = gamma_eff / gamma_e`.
//!
//! Dynamics is tracked on the coherence vector
//! `(rho_11, rho_22, rho_12, rho_21, rho_13, rho_31, rho_23, rho_32)`
//! with `rho_33 = 1 - rho_11 - rho_22` eliminated, so the master equation
//! becomes the affine system `d rho / dt = A rho - b`.

use num_complex::Complex64 as C;

use crate::density::Density3;
use crate::linalg::{c, solve8, ZERO};
use crate::ode::{integrate_at, OdeOpts, OdeSystem};
use crate::two_level::{steady_state, Trajectory2};
use crate::{Error, Result};

/// Angular rates of the ladder (rad/s), all nonnegative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreeLevelParams {
    omega: f64,
    omega_tilde: f64,
    gamma_e: f64,
}

impl ThreeLevelParams {
    pub fn new(omega: f64, omega_tilde: f64, gamma_e: f64) -> Result<Self> {
        for (name, v) in [
            ("drive rate", omega),
            ("ladder coupling", omega_tilde),
            ("ladder decay rate", gamma_e),
        ] {
            if v < 0.0 || !v.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be finite and nonnegative, got {v}"
                )));
            }
        }
        Ok(Self {
            omega,
            omega_tilde,
            gamma_e,
        })
    }

    #[inline]
    pub fn omega(&self) -> f64 {
        self.omega
    }

    #[inline]
    pub fn omega_tilde(&self) -> f64 {
        self.omega_tilde
    }

    #[inline]
    pub fn gamma_e(&self) -> f64 {
        self.gamma_e
    }

    /// Effective decay rate of level 2 through the ladder,
    /// `omega_tilde^2 / gamma_e`.
    pub fn gamma_eff(&self) -> Result<f64> {
        if self.gamma_e <= 0.0 {
            return Err(Error::InvalidParameter(
                "effective rate requires a nonzero ladder decay rate".into(),
            ));
        }
        Ok(self.omega_tilde * self.omega_tilde / self.gamma_e)
    }

    /// Whether the scale hierarchy `gamma_e >= 10 omega_tilde` and
    /// `omega_tilde >= 10 omega` supporting the two-level reduction holds.
    pub fn valid_reduction(&self) -> bool {
        self.gamma_e >= 10.0 * self.omega_tilde && self.omega_tilde >= 10.0 * self.omega
    }
}

/// The affine generator `d rho / dt = A rho - b` on the coherence vector.
#[derive(Debug, Clone)]
pub struct Liouvillian8 {
    pub a_matrix: [[C; 8]; 8],
    pub b_vector: [C; 8],
}

/// Builds the generator of the ladder master equation.
pub fn liouvillian(p: &ThreeLevelParams) -> Liouvillian8 {
    let om = p.omega;
    let omt = p.omega_tilde;
    let ge = p.gamma_e;
    let ih = |v: f64| c(0.0, v);
    let re = |v: f64| c(v, 0.0);
    let a_matrix = [
        [re(-ge), re(-ge), ih(om / 2.0), ih(-om / 2.0), ZERO, ZERO, ZERO, ZERO],
        [ZERO, ZERO, ih(-om / 2.0), ih(om / 2.0), ZERO, ZERO, ih(omt / 2.0), ih(-omt / 2.0)],
        [ih(om / 2.0), ih(-om / 2.0), ZERO, ZERO, ih(omt / 2.0), ZERO, ZERO, ZERO],
        [ih(-om / 2.0), ih(om / 2.0), ZERO, ZERO, ZERO, ih(-omt / 2.0), ZERO, ZERO],
        [ZERO, ZERO, ih(omt / 2.0), ZERO, re(-ge / 2.0), ZERO, ih(-om / 2.0), ZERO],
        [ZERO, ZERO, ZERO, ih(-omt / 2.0), ZERO, re(-ge / 2.0), ZERO, ih(om / 2.0)],
        [ih(omt / 2.0), ih(omt), ZERO, ZERO, ih(-om / 2.0), ZERO, re(-ge / 2.0), ZERO],
        [ih(-omt / 2.0), ih(-omt), ZERO, ZERO, ZERO, ih(om / 2.0), ZERO, re(-ge / 2.0)],
    ];
    let b_vector = [
        re(-ge),
        ZERO,
        ZERO,
        ZERO,
        ZERO,
        ZERO,
        ih(omt / 2.0),
        ih(-omt / 2.0),
    ];
    Liouvillian8 { a_matrix, b_vector }
}

fn density_to_vec8(rho: &Density3) -> [C; 8] {
    let m = rho.matrix();
    [
        m[0][0], m[1][1], m[0][1], m[1][0], m[0][2], m[2][0], m[1][2], m[2][1],
    ]
}

fn vec8_to_density(v: &[C; 8]) -> Result<Density3> {
    let r11 = c(v[0].re, 0.0);
    let r22 = c(v[1].re, 0.0);
    let r33 = c(1.0 - v[0].re - v[1].re, 0.0);
    let r12 = 0.5 * (v[2] + v[3].conj());
    let r13 = 0.5 * (v[4] + v[5].conj());
    let r23 = 0.5 * (v[6] + v[7].conj());
    Density3::new([
        [r11, r12, r13],
        [r12.conj(), r22, r23],
        [r13.conj(), r23.conj(), r33],
    ])
}

/// Steady state of the ladder, from the linear system `A rho = b`.
pub fn steady3(p: &ThreeLevelParams) -> Result<Density3> {
    let gen = liouvillian(p);
    let v = solve8(&gen.a_matrix, &gen.b_vector)?;
    vec8_to_density(&v)
}

/// A ladder trajectory sampled on a fixed time grid.
#[derive(Debug, Clone)]
pub struct Trajectory3 {
    pub times: Vec<f64>,
    pub states: Vec<Density3>,
    pub params: ThreeLevelParams,
}

/// The generator reduced to eight real components
/// `(rho_11, rho_22, Re rho_12, Im rho_12, Re rho_13, Im rho_13,
/// Re rho_23, Im rho_23)`, which keeps Hermiticity exact during
/// integration. The real matrix is probed column by column from the
/// complex generator.
struct RealFlow {
    m: [[f64; 8]; 8],
    b: [f64; 8],
}

fn real_components(v: &[C; 8]) -> [f64; 8] {
    [
        v[0].re, v[1].re, v[2].re, v[2].im, v[4].re, v[4].im, v[6].re, v[6].im,
    ]
}

fn complexify(y: &[f64; 8]) -> [C; 8] {
    [
        c(y[0], 0.0),
        c(y[1], 0.0),
        c(y[2], y[3]),
        c(y[2], -y[3]),
        c(y[4], y[5]),
        c(y[4], -y[5]),
        c(y[6], y[7]),
        c(y[6], -y[7]),
    ]
}

impl RealFlow {
    fn build(gen: &Liouvillian8) -> Self {
        let mut m = [[0.0; 8]; 8];
        for j in 0..8 {
            let mut e = [0.0; 8];
            e[j] = 1.0;
            let v = complexify(&e);
            let mut av = [ZERO; 8];
            for (row, av_row) in av.iter_mut().enumerate() {
                for k in 0..8 {
                    *av_row += gen.a_matrix[row][k] * v[k];
                }
            }
            let col = real_components(&av);
            for (row, val) in col.into_iter().enumerate() {
                m[row][j] = val;
            }
        }
        let b = real_components(&gen.b_vector);
        Self { m, b }
    }
}

impl OdeSystem<8> for RealFlow {
    #[inline]
    fn rhs(&self, _t: f64, y: &[f64; 8], dy: &mut [f64; 8]) {
        for i in 0..8 {
            let row = &self.m[i];
            let mut acc = -self.b[i];
            for j in 0..8 {
                acc += row[j] * y[j];
            }
            dy[i] = acc;
        }
    }
}

/// Integrates the ladder master equation, sampling at `times`; `rho0` is
/// the state at `times[0]`.
///
/// The step size is capped at `3 / gamma_e` (and the other rates), which
/// is where the explicit stepper is still stable on the fast decay
/// eigenvalue; the error controller shortens steps further inside the
/// initial boundary layer.
pub fn evolve3(p: &ThreeLevelParams, rho0: &Density3, times: &[f64]) -> Result<Trajectory3> {
    let gen = liouvillian(p);
    let flow = RealFlow::build(&gen);
    let rate = p.gamma_e.max(p.omega_tilde).max(p.omega);
    if rate <= 0.0 {
        return Err(Error::InvalidParameter(
            "ladder evolution requires at least one nonzero rate".into(),
        ));
    }
    let opts = OdeOpts {
        h_max: 3.0 / rate,
        ..OdeOpts::default()
    };
    let y0 = real_components(&density_to_vec8(rho0));
    let raw = integrate_at(&flow, y0, times, &opts)?;
    let states = raw
        .iter()
        .map(|y| vec8_to_density(&complexify(y)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Trajectory3 {
        times: times.to_vec(),
        states,
        params: *p,
    })
}

/// Relative width of the guard band around `gamma_e = 2 omega_tilde`
/// where the closed-form decay denominators vanish.
const DECAY_GUARD: f64 = 1e-8;

/// Closed-form populations for pure ladder decay from level 2
/// (`omega = 0`): with `W = sqrt(gamma_e^2 - 4 omega_tilde^2)` and
/// `E_pm = exp(-(gamma_e pm W) t / 2)`,
///
/// ```text
/// rho_11 = [8 omt^2 e^{-gamma_e t/2} + 2 (gamma_e^2 - 4 omt^2)
///           + gamma_e (W - gamma_e) E+ - gamma_e (W + gamma_e) E-]
///          / [2 (gamma_e^2 - 4 omt^2)]
/// rho_33 = omt^2 (E- - 2 e^{-gamma_e t/2} + E+) / (gamma_e^2 - 4 omt^2)
/// ```
///
/// Near the degenerate point `gamma_e = 2 omega_tilde` the routine falls
/// back to the integrator.
pub fn decay_closed_form(p: &ThreeLevelParams, times: &[f64]) -> Result<Vec<[f64; 3]>> {
    if p.omega != 0.0 {
        return Err(Error::InvalidParameter(
            "closed-form decay requires the 1-2 drive to be off".into(),
        ));
    }
    if p.gamma_e <= 0.0 {
        return Err(Error::InvalidParameter(
            "closed-form decay requires a nonzero ladder decay rate".into(),
        ));
    }
    let ge = p.gamma_e;
    let omt = p.omega_tilde;
    let disc = ge * ge - 4.0 * omt * omt;
    if disc.abs() < DECAY_GUARD * ge * ge {
        let traj = evolve3(p, &Density3::basis_state(1), times)?;
        return Ok(traj.states.iter().map(|s| s.populations()).collect());
    }
    let w = c(disc, 0.0).sqrt();
    let out = times
        .iter()
        .map(|&t| {
            let half = (-0.5 * ge * t).exp();
            let ep = (-(ge + w) * t / 2.0).exp();
            let em = (-(ge - w) * t / 2.0).exp();
            let r11 = ((8.0 * omt * omt * half + 2.0 * disc + ge * (w - ge) * ep
                - ge * (w + ge) * em)
                / (2.0 * disc))
                .re;
            let r33 = (omt * omt * (em - 2.0 * half + ep) / disc).re;
            [r11, 1.0 - r11 - r33, r33]
        })
        .collect();
    Ok(out)
}

/// Fits the effective decay rate of level 2 from a ladder trajectory by
/// linear regression of `ln rho_22` over the window
/// `[5 / gamma_e, gamma_e / (2 omega_tilde^2)]`, i.e. after the fast
/// boundary layer and within the first effective lifetime.
pub fn fit_effective_decay(traj: &Trajectory3) -> Result<f64> {
    let p = traj.params;
    if p.gamma_e <= 0.0 || p.omega_tilde <= 0.0 {
        return Err(Error::InvalidParameter(
            "decay fit requires nonzero ladder coupling and decay rates".into(),
        ));
    }
    let lo = 5.0 / p.gamma_e;
    let hi = 0.5 * p.gamma_e / (p.omega_tilde * p.omega_tilde);
    let mut ts = Vec::new();
    let mut ln_p = Vec::new();
    let mut prev = f64::INFINITY;
    for (k, &t) in traj.times.iter().enumerate() {
        if t < lo || t > hi {
            continue;
        }
        let p22 = traj.states[k].populations()[1];
        if p22 <= 0.0 {
            return Err(Error::Numerics(format!(
                "population vanished inside the fit window at t = {t:.6e}"
            )));
        }
        if p22 > prev * (1.0 + 1e-9) {
            return Err(Error::Numerics(
                "population is not monotonically decreasing in the fit window".into(),
            ));
        }
        prev = p22;
        ts.push(t);
        ln_p.push(p22.ln());
    }
    if ts.len() < 4 {
        return Err(Error::InvalidParameter(format!(
            "fit window [{lo:.3e}, {hi:.3e}] holds only {} samples",
            ts.len()
        )));
    }
    let n = ts.len() as f64;
    let mean_t = ts.iter().sum::<f64>() / n;
    let mean_y = ln_p.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (t, y) in ts.iter().zip(&ln_p) {
        sxx += (t - mean_t) * (t - mean_t);
        sxy += (t - mean_t) * (y - mean_y);
    }
    if sxx == 0.0 {
        return Err(Error::Numerics("degenerate fit window".into()));
    }
    Ok(-sxy / sxx)
}

/// Spectrum of the reduced steady state corrected for the finite ladder,
/// parameterised by `r = gamma_eff / gamma_e`.
#[derive(Debug, Clone, Copy)]
pub struct TildeSpectrum {
    pub lambda_minus: f64,
    pub lambda_plus: f64,
    pub theta_minus: f64,
    pub theta_plus: f64,
    /// Effective inverse temperature per unit bare gap.
    pub beta: f64,
}

/// Corrected Gibbs spectrum of the reduced description at leakage `r`.
///
/// With `g2 = gamma^2 - r omega^2`, `N = gamma^2 + 2 omega^2` and
/// `root = sqrt(g2^2 + 4 gamma^2 omega^2)`:
///
/// ```text
/// lambda_- = (g2 + 2 omega^2 + root) / (2 N)
/// lambda_+ = omega^4 (1 - r) / (N^2 lambda_-)
/// sin^2 theta_pm = (1 pm g2 / root) / 2
/// beta = (2 root / g2) ln[(g2 + 2 omega^2 + root) / (2 (1 - r) omega^2)]
/// ```
///
/// `r = 0` recovers the two-level spectrum exactly.
pub fn tilde_spectrum(gamma: f64, omega: f64, r: f64) -> Result<TildeSpectrum> {
    if gamma <= 0.0 || omega <= 0.0 {
        return Err(Error::InvalidParameter(
            "corrected spectrum requires nonzero decay and drive rates".into(),
        ));
    }
    if !(0.0..1.0).contains(&r) {
        return Err(Error::InvalidParameter(format!(
            "leakage fraction must lie in [0, 1), got {r}"
        )));
    }
    let om2 = omega * omega;
    let g2 = gamma * gamma - r * om2;
    let n = gamma * gamma + 2.0 * om2;
    let root = (g2 * g2 + 4.0 * gamma * gamma * om2).sqrt();
    let lambda_minus = (g2 + 2.0 * om2 + root) / (2.0 * n);
    let lambda_plus = om2 * om2 * (1.0 - r) / (n * n * lambda_minus);
    let sin2_plus = 0.5 * (1.0 + g2 / root);
    let sin2_minus = 0.5 * (1.0 - g2 / root);
    let beta =
        (2.0 * root / g2) * ((g2 + 2.0 * om2 + root) / (2.0 * (1.0 - r) * om2)).ln();
    Ok(TildeSpectrum {
        lambda_minus,
        lambda_plus,
        theta_minus: sin2_minus.sqrt().asin(),
        theta_plus: sin2_plus.sqrt().asin(),
        beta,
    })
}

/// Reduced description of the ladder: effective rate, ground-state weight
/// shift `xi`, leakage fraction `r` and the corrected spectrum.
#[derive(Debug, Clone, Copy)]
pub struct EffectiveReduction {
    pub gamma_eff: f64,
    pub xi: f64,
    pub r: f64,
    pub lambda_tilde_minus: f64,
    pub lambda_tilde_plus: f64,
    pub theta_tilde_minus: f64,
    pub theta_tilde_plus: f64,
    pub beta_tilde: f64,
}

/// Computes the reduced description; requires a driven ladder with
/// nonzero `omega_tilde` and `gamma_e`.
pub fn effective_reduction(p: &ThreeLevelParams) -> Result<EffectiveReduction> {
    let gamma_eff = p.gamma_eff()?;
    if gamma_eff <= 0.0 {
        return Err(Error::InvalidParameter(
            "reduction requires a nonzero ladder coupling".into(),
        ));
    }
    let r = gamma_eff / p.gamma_e;
    let xi = r * p.omega * p.omega / (gamma_eff * gamma_eff + 2.0 * p.omega * p.omega);
    let spec = tilde_spectrum(gamma_eff, p.omega, r)?;
    Ok(EffectiveReduction {
        gamma_eff,
        xi,
        r,
        lambda_tilde_minus: spec.lambda_minus,
        lambda_tilde_plus: spec.lambda_plus,
        theta_tilde_minus: spec.theta_minus,
        theta_tilde_plus: spec.theta_plus,
        beta_tilde: spec.beta,
    })
}

/// Distance to stationarity `epsilon(t) = D(rho_t || rho_s)` along a
/// ladder trajectory.
pub fn steady_deviation3(traj: &Trajectory3) -> Result<Vec<f64>> {
    let rho_s = steady3(&traj.params)?;
    traj.states
        .iter()
        .map(|s| crate::density::relative_entropy3(s, &rho_s))
        .collect()
}

/// Distance to stationarity for a two-level trajectory.
pub fn steady_deviation2(traj: &Trajectory2) -> Result<Vec<f64>> {
    let rho_s = steady_state(&traj.params)?;
    (0..traj.times.len())
        .map(|k| crate::density::relative_entropy(&traj.density_at(k)?, &rho_s))
        .collect()
}

/// Waiting time until the distance to stationarity drops to `eps`,
/// `t_w = -ln(eps) / gamma`.
pub fn waiting_time(gamma: f64, eps: f64) -> Result<f64> {
    if gamma <= 0.0 {
        return Err(Error::InvalidParameter(
            "waiting time requires a positive relaxation rate".into(),
        ));
    }
    if !(0.0..1.0).contains(&eps) || eps == 0.0 {
        return Err(Error::InvalidParameter(format!(
            "target deviation must lie in (0, 1), got {eps}"
        )));
    }
    Ok(-eps.ln() / gamma)
}
