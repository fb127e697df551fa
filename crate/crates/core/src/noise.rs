//! Projection noise for finite measurement statistics: binomial standard
//! errors, their propagation into the von Neumann entropy, the
//! experimental error floor, and synthetic shot-noise decoration of
//! trajectories.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use crate::density::BlochVector;
use crate::two_level::Trajectory2;
use crate::{Error, Result};

/// Measurement statistics: shots per basis and the systematic floor.
#[derive(Debug, Clone, Copy)]
pub struct NoiseModel {
    pub n_shots: u64,
    pub eps_exp: f64,
}

impl NoiseModel {
    pub fn new(n_shots: u64, eps_exp: f64) -> Result<Self> {
        if n_shots < 1 {
            return Err(Error::InvalidParameter(
                "shot count must be at least 1".into(),
            ));
        }
        if eps_exp < 0.0 || !eps_exp.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "systematic floor must be finite and nonnegative, got {eps_exp}"
            )));
        }
        Ok(Self { n_shots, eps_exp })
    }
}

impl Default for NoiseModel {
    fn default() -> Self {
        Self {
            n_shots: 10_000,
            eps_exp: 0.01,
        }
    }
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!(
            "probability must lie in [0, 1], got {p}"
        )));
    }
    Ok(())
}

/// Binomial standard error `sqrt(p (1 - p) / n)` of a population
/// estimated from `n` projective shots.
pub fn projection_noise(p: f64, n: u64) -> Result<f64> {
    check_probability(p)?;
    if n < 1 {
        return Err(Error::InvalidParameter(
            "shot count must be at least 1".into(),
        ));
    }
    Ok((p * (1.0 - p) / n as f64).sqrt())
}

/// First-order propagation of the projection noise into the von Neumann
/// entropy of a state with populations `(p_g, 1 - p_g)`:
/// `eps_S = eps_g sqrt[(1 + ln p_g)^2 + (1 + ln p_e)^2]`.
///
/// Vanishes at both endpoints, where the projection noise itself goes to
/// zero faster than the logarithms diverge.
pub fn entropy_error(p_g: f64, n: u64) -> Result<f64> {
    check_probability(p_g)?;
    if p_g == 0.0 || p_g == 1.0 {
        return Ok(0.0);
    }
    let eps_g = projection_noise(p_g, n)?;
    let a = 1.0 + p_g.ln();
    let b = 1.0 + (1.0 - p_g).ln();
    Ok(eps_g * (a * a + b * b).sqrt())
}

/// Entropy error with the systematic floor folded in:
/// `sqrt(entropy_error^2 + (eps_exp ln(1 / min(p_g, 1 - p_g)))^2)`.
///
/// The floor term dominates near the boundary and diverges
/// logarithmically at the endpoints (the statistical term alone would
/// vanish there). `eps_exp = 0` reduces to `entropy_error` exactly.
pub fn entropy_error_floor(p_g: f64, n: u64, eps_exp: f64) -> Result<f64> {
    check_probability(p_g)?;
    if eps_exp < 0.0 || !eps_exp.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "systematic floor must be finite and nonnegative, got {eps_exp}"
        )));
    }
    let stat = entropy_error(p_g, n)?;
    if eps_exp == 0.0 {
        return Ok(stat);
    }
    let floor = eps_exp * (1.0 / p_g.min(1.0 - p_g)).ln();
    Ok((stat * stat + floor * floor).sqrt())
}

/// A trajectory reconstructed from synthetic projective shots, with
/// per-axis standard errors.
#[derive(Debug, Clone)]
pub struct NoisyTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<BlochVector>,
    /// Standard errors `(x_err, y_err, z_err)` of the raw per-axis
    /// estimates, before any projection back to the Bloch ball.
    pub errors: Vec<[f64; 3]>,
}

impl NoisyTrajectory {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,x,y,z,x_err,y_err,z_err\n");
        for k in 0..self.times.len() {
            let s = &self.states[k];
            let e = &self.errors[k];
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                self.times[k], s.x, s.y, s.z, e[0], e[1], e[2]
            ));
        }
        out
    }
}

/// Simulates three-axis projective tomography of a trajectory: at every
/// grid time each Bloch component is estimated from `n_shots` binomial
/// draws, and estimates with `|r| > 1` are scaled back to the ball
/// surface. Deterministic under a fixed seed.
pub fn simulate_shots(
    traj: &Trajectory2,
    model: &NoiseModel,
    seed: u64,
) -> Result<NoisyTrajectory> {
    if model.n_shots < 1 {
        return Err(Error::InvalidParameter(
            "shot count must be at least 1".into(),
        ));
    }
    let n = model.n_shots;
    let nf = n as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut states = Vec::with_capacity(traj.times.len());
    let mut errors = Vec::with_capacity(traj.times.len());
    for b in &traj.states {
        let mut est = [0.0_f64; 3];
        let mut err = [0.0_f64; 3];
        for (i, comp) in [b.x, b.y, b.z].into_iter().enumerate() {
            let p_up = (0.5 * (1.0 + comp)).clamp(0.0, 1.0);
            let dist = Binomial::new(n, p_up)
                .map_err(|e| Error::InvalidParameter(format!("binomial draw: {e}")))?;
            let p_hat = dist.sample(&mut rng) as f64 / nf;
            est[i] = 2.0 * p_hat - 1.0;
            err[i] = 2.0 * (p_hat * (1.0 - p_hat) / nf).sqrt();
        }
        let norm = (est[0] * est[0] + est[1] * est[1] + est[2] * est[2]).sqrt();
        if norm > 1.0 {
            for e in &mut est {
                *e /= norm;
            }
        }
        states.push(BlochVector::new(est[0], est[1], est[2])?);
        errors.push(err);
    }
    Ok(NoisyTrajectory {
        times: traj.times.clone(),
        states,
        errors,
    })
}
