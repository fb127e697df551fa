//! Characterisation of initial states and the pre-evolution preparation
//! protocol.
//!
//! A state card collects everything the entropy ledger needs to know about
//! a starting state: its spectrum, the mean energies carried by the two
//! eigenbranches, the effective gap between them, its entropy, and the
//! bath entropy it would release by dumping its bare excitation.

use crate::density::{
    bare_energy, bloch_from_density, eig2, von_neumann_entropy, BlochVector, Density2,
    EnergyConvention,
};
use crate::two_level::{evolve, steady_spectrum, SystemParams2};
use crate::Result;

/// Spectral and energetic card of an initial state.
///
/// `e_plus`/`e_minus` are the mean bare energies carried by the plus and
/// minus eigenvectors, `[(|r| pm z) e2 + (|r| mp z) e1] / (2 |r|)`; their
/// sum is always `e1 + e2` and their difference
/// `delta_e = (z/|r|)(e2 - e1)` is nonnegative exactly when `z >= 0`. For
/// a fully mixed state both branches carry the midpoint energy.
#[derive(Debug, Clone)]
pub struct InitialStateReport {
    pub bloch: BlochVector,
    pub lambda_minus: f64,
    pub lambda_plus: f64,
    pub e_minus: f64,
    pub e_plus: f64,
    pub delta_e: f64,
    /// Von Neumann entropy of the state, in nats.
    pub s_sys: f64,
    /// Bath entropy released by dumping the mean bare energy into the
    /// bath at the steady-state inverse temperature:
    /// `-beta sum E_pm lambda_pm = -beta E_bare`.
    pub s_bath: f64,
}

/// Builds the state card of `rho` for a system with the given rates.
pub fn characterize_initial(
    rho: &Density2,
    p: &SystemParams2,
    convention: &EnergyConvention,
) -> Result<InitialStateReport> {
    let bloch = bloch_from_density(rho);
    let spectrum = eig2(rho);
    let norm = bloch.norm();
    let (e_plus, e_minus, delta_e) = if norm > 0.0 {
        let e_plus = ((norm + bloch.z) * convention.e2 + (norm - bloch.z) * convention.e1)
            / (2.0 * norm);
        let e_minus = ((norm - bloch.z) * convention.e2 + (norm + bloch.z) * convention.e1)
            / (2.0 * norm);
        (e_plus, e_minus, bloch.z / norm * convention.gap())
    } else {
        let mid = 0.5 * (convention.e1 + convention.e2);
        (mid, mid, 0.0)
    };
    let s_sys = von_neumann_entropy(rho)?;
    let beta = steady_spectrum(p, convention)?.beta;
    let s_bath = -beta * bare_energy(rho, convention);
    Ok(InitialStateReport {
        bloch,
        lambda_minus: spectrum.lambda_minus,
        lambda_plus: spectrum.lambda_plus,
        e_minus,
        e_plus,
        delta_e,
        s_sys,
        s_bath,
    })
}

/// Prepares an initial state by evolving the excited state for `tau0`
/// under the given rates, using the same integration path as any other
/// evolution. With the drive off this is plain exponential decay,
/// `z(tau0) = 2 exp(-gamma tau0) - 1`.
pub fn prepare_by_pre_evolution(p: &SystemParams2, tau0: f64) -> Result<Density2> {
    if tau0 < 0.0 || !tau0.is_finite() {
        return Err(crate::Error::InvalidParameter(format!(
            "preparation time must be finite and nonnegative, got {tau0}"
        )));
    }
    let traj = evolve(p, &Density2::excited(), &[0.0, tau0])?;
    traj.density_at(traj.states.len() - 1)
}
