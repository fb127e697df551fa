//! The entropy ledger: system entropy change, bath entropy flow, their
//! total, the relative entropy `D(rho_0 || rho_t)` and the balance
//!
//! ```text
//! upsilon(t) = sigma_total(t) - D(rho_0 || rho_t),
//! ```
//!
//! all accumulated along a two-level trajectory, plus the small-drive and
//! strong-drive closed forms for `upsilon` and the critical time at which
//! the strong-drive formula changes sign.
//!
//! `upsilon >= 0` holds whenever the relative entropy between the evolving
//! state and the steady state shrinks monotonically; regions of the Bloch
//! ball where `upsilon` dips below zero mark initial states whose
//! relaxation beats that bound.

use crate::density::{binary_entropy, BlochVector, EnergyConvention};
use crate::two_level::{steady_spectrum, SystemParams2, Trajectory2};
use crate::{Error, Result};

/// How the bath entropy flow is read off the trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BathConvention {
    /// Heat counted through the populations of the steady-state
    /// eigenbasis: `sigma_bath = ln(lambda_-/lambda_+) [p_-(t) - p_-(0)]`.
    EffectiveBasis,
    /// Heat counted through the bare level populations:
    /// `sigma_bath = beta [E_bare(0) - E_bare(t)]`. This is the default:
    /// emitted quanta carry the bare gap, which is what a photon counter
    /// in the decay channel registers.
    #[default]
    BareEigenEnergy,
}

impl BathConvention {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::EffectiveBasis => "effective-basis",
            Self::BareEigenEnergy => "bare-eigen-energy",
        }
    }
}

/// Entropy accounting along a trajectory. All columns share the time grid
/// and start at exact zeros; `rel_entropy` may hold `f64::INFINITY` when
/// the initial state is pure and the evolved state touches the ball
/// surface, in which case `upsilon` is `-inf` at that sample.
#[derive(Debug, Clone)]
pub struct EntropyLedger {
    pub times: Vec<f64>,
    pub sigma_sys: Vec<f64>,
    pub sigma_bath: Vec<f64>,
    pub sigma_total: Vec<f64>,
    pub rel_entropy: Vec<f64>,
    pub upsilon: Vec<f64>,
    pub convention: BathConvention,
}

impl EntropyLedger {
    /// Serialises to CSV: header row, `.` decimal separator, LF line
    /// endings, infinities as `inf`.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * self.times.len());
        out.push_str("t,sigma_sys,sigma_bath,sigma_total,rel_entropy,upsilon\n");
        for k in 0..self.times.len() {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                self.times[k],
                self.sigma_sys[k],
                self.sigma_bath[k],
                self.sigma_total[k],
                self.rel_entropy[k],
                self.upsilon[k]
            ));
        }
        out
    }
}

#[inline]
fn entropy_of_radius(r: f64) -> f64 {
    let r = r.min(1.0);
    let lp = 0.5 * (1.0 + r);
    let lm = 0.5 * (1.0 - r);
    let mut s = 0.0;
    if lp > 0.0 {
        s -= lp * lp.ln();
    }
    if lm > 0.0 {
        s -= lm * lm.ln();
    }
    s
}

/// Relative entropy `D(rho_0 || rho_t)` directly from Bloch vectors:
/// `-S(rho_0) - sum_pm (1 pm d)/2 ln[(1 pm |r_t|)/2]` with
/// `d = (r_0 . r_t)/|r_t|`. Infinite when `rho_t` is pure along a
/// direction `rho_0` has weight across.
fn rel_entropy_bloch(r0: &BlochVector, s0: f64, rt: &BlochVector) -> f64 {
    let nt = rt.norm().min(1.0);
    let d = if nt > 0.0 {
        ((r0.x * rt.x + r0.y * rt.y + r0.z * rt.z) / rt.norm()).clamp(-1.0, 1.0)
    } else {
        0.0
    };
    let mut acc = -s0;
    for (lam, weight) in [
        (0.5 * (1.0 + nt), 0.5 * (1.0 + d)),
        (0.5 * (1.0 - nt), 0.5 * (1.0 - d)),
    ] {
        if lam <= 0.0 {
            if weight > 1e-12 {
                return f64::INFINITY;
            }
        } else {
            acc -= weight * lam.ln();
        }
    }
    acc
}

/// Builds the entropy ledger of a trajectory under the given bath
/// convention. Requires a driven system (`omega > 0`), since the bath
/// accounting runs through the steady-state spectrum.
pub fn entropy_ledger(
    traj: &Trajectory2,
    convention: BathConvention,
    energy: &EnergyConvention,
) -> Result<EntropyLedger> {
    if traj.times.is_empty() {
        return Err(Error::InvalidParameter("empty trajectory".into()));
    }
    let spec = steady_spectrum(&traj.params, energy)?;
    let ln_ratio = spec.ln_population_ratio();
    let sin2t = spec.sin_two_theta_minus();
    let cos2t = spec.cos_two_theta_minus();
    // beta * gap: bath entropy per emitted bare quantum.
    let beta_gap = spec.beta * energy.gap();

    let n = traj.times.len();
    let r0 = traj.states[0];
    let s0 = entropy_of_radius(r0.norm());
    let p_minus_0 = 0.5 * (1.0 - r0.y * sin2t - r0.z * cos2t);

    let mut ledger = EntropyLedger {
        times: traj.times.clone(),
        sigma_sys: vec![0.0; n],
        sigma_bath: vec![0.0; n],
        sigma_total: vec![0.0; n],
        rel_entropy: vec![0.0; n],
        upsilon: vec![0.0; n],
        convention,
    };
    for k in 1..n {
        let rt = traj.states[k];
        let s_sys = entropy_of_radius(rt.norm()) - s0;
        let s_bath = match convention {
            BathConvention::BareEigenEnergy => {
                // E_bare(0) - E_bare(t) = gap (rho22(0) - rho22(t)).
                beta_gap * 0.5 * (r0.z - rt.z)
            }
            BathConvention::EffectiveBasis => {
                let p_minus = 0.5 * (1.0 - rt.y * sin2t - rt.z * cos2t);
                ln_ratio * (p_minus - p_minus_0)
            }
        };
        let d = rel_entropy_bloch(&r0, s0, &rt);
        ledger.sigma_sys[k] = s_sys;
        ledger.sigma_bath[k] = s_bath;
        ledger.sigma_total[k] = s_sys + s_bath;
        ledger.rel_entropy[k] = d;
        ledger.upsilon[k] = s_sys + s_bath - d;
    }
    Ok(ledger)
}

/// Uniform ledger time grid from 0 to `horizon` with at least `per_scale`
/// samples per shortest dynamical time scale.
pub fn ledger_time_grid(p: &SystemParams2, horizon: f64, per_scale: usize) -> Vec<f64> {
    let ts = crate::two_level::time_scales(p);
    let scale = ts.tau_a.min(ts.tau_coh);
    let dt = scale / per_scale as f64;
    let n = (horizon / dt).ceil() as usize;
    let n = n.max(per_scale);
    (0..=n).map(|i| horizon * i as f64 / n as f64).collect()
}

/// Small-drive closed form for `upsilon(t)` from the excited state,
/// `H(gamma t) + 4 gamma t ln(gamma/omega) - gamma t`, valid for
/// `omega/gamma < 0.15` and `gamma t < 0.2`.
pub fn asymptotic_upsilon_small(p: &SystemParams2, gamma_t: f64) -> Result<f64> {
    if p.ratio() >= 0.15 {
        return Err(Error::OutOfRegime(format!(
            "small-drive formula needs omega/gamma < 0.15, got {}",
            p.ratio()
        )));
    }
    if !(0.0..0.2).contains(&gamma_t) {
        return Err(Error::OutOfRegime(format!(
            "small-drive formula needs gamma t in [0, 0.2), got {gamma_t}"
        )));
    }
    Ok(binary_entropy(gamma_t)? + 4.0 * gamma_t * (p.gamma() / p.omega()).ln() - gamma_t)
}

/// Strong-drive closed form for `upsilon(t)` from the excited state,
/// `[2 gamma - omega (ln 4 - 1 - 2 ln(omega t))] omega t^2 / 4`, valid for
/// `omega/gamma >= 25` and `omega t < 0.5`.
pub fn asymptotic_upsilon_ultralarge(p: &SystemParams2, omega_t: f64) -> Result<f64> {
    if p.ratio() < 25.0 {
        return Err(Error::OutOfRegime(format!(
            "strong-drive formula needs omega/gamma >= 25, got {}",
            p.ratio()
        )));
    }
    if !(0.0..0.5).contains(&omega_t) {
        return Err(Error::OutOfRegime(format!(
            "strong-drive formula needs omega t in [0, 0.5), got {omega_t}"
        )));
    }
    if omega_t == 0.0 {
        return Ok(0.0);
    }
    let t = omega_t / p.omega();
    Ok((2.0 * p.gamma() - p.omega() * (4f64.ln() - 1.0 - 2.0 * omega_t.ln())) * p.omega() * t * t
        / 4.0)
}

/// Critical time of the strong-drive formula,
/// `t_c = (2/omega) exp(-(omega + 2 gamma)/(2 omega))`; the formula is
/// negative below `t_c`. Valid for `omega/gamma >= 25`.
pub fn critical_time(p: &SystemParams2) -> Result<f64> {
    if p.ratio() < 25.0 {
        return Err(Error::OutOfRegime(format!(
            "critical time needs omega/gamma >= 25, got {}",
            p.ratio()
        )));
    }
    Ok(2.0 / p.omega() * (-(p.omega() + 2.0 * p.gamma()) / (2.0 * p.omega())).exp())
}

/// Global minimum of `upsilon` over the ledger grid (including `t = 0`),
/// refined by a parabola through the winning sample and its neighbours.
/// Non-finite samples are skipped; errors when fewer than two finite
/// samples remain. Returns `(min_upsilon, t_star)`.
pub fn min_upsilon(ledger: &EntropyLedger) -> Result<(f64, f64)> {
    let u = &ledger.upsilon;
    let t = &ledger.times;
    let finite = u.iter().filter(|v| v.is_finite()).count();
    if finite < 2 {
        return Err(Error::InvalidParameter(
            "ledger has fewer than two finite upsilon samples".into(),
        ));
    }
    let mut best = usize::MAX;
    for k in 0..u.len() {
        if u[k].is_finite() && (best == usize::MAX || u[k] < u[best]) {
            best = k;
        }
    }
    let k = best;
    if k == 0 || k + 1 >= u.len() || !u[k - 1].is_finite() || !u[k + 1].is_finite() {
        return Ok((u[k], t[k]));
    }
    // Quadratic through the three samples around the winner.
    let (t0, t1, t2) = (t[k - 1], t[k], t[k + 1]);
    let (u0, u1, u2) = (u[k - 1], u[k], u[k + 1]);
    let d01 = t1 - t0;
    let d12 = t2 - t1;
    let slope_l = (u1 - u0) / d01;
    let slope_r = (u2 - u1) / d12;
    let curvature = 2.0 * (slope_r - slope_l) / (d01 + d12);
    if curvature <= 0.0 || !curvature.is_finite() {
        return Ok((u1, t1));
    }
    let t_star = (0.5 * (t0 + t1) - slope_l / curvature).clamp(t0, t2);
    // Evaluate the same quadratic at its vertex via Lagrange form.
    let l0 = (t_star - t1) * (t_star - t2) / ((t0 - t1) * (t0 - t2));
    let l1 = (t_star - t0) * (t_star - t2) / ((t1 - t0) * (t1 - t2));
    let l2 = (t_star - t0) * (t_star - t1) / ((t2 - t0) * (t2 - t1));
    let u_star = u0 * l0 + u1 * l1 + u2 * l2;
    if u_star <= u1 {
        Ok((u_star, t_star))
    } else {
        Ok((u1, t1))
    }
}
