//! Entropy accounting for a driven dissipative two-level emitter.
//!
//! This crate models a resonantly driven two-level system coupled to a
//! zero-temperature bath (spontaneous emission at rate `gamma`, Rabi drive
//! at angular frequency `omega`) together with the three-level ladder that
//! realises it physically. Its central object is the balance
//!
//! ```text
//! upsilon(t) = sigma_sys(t) + sigma_bath(t) - D(rho_0 || rho_t)
//! ```
//!
//! between the total entropy production and the relative entropy of the
//! initial state with respect to the evolved state. The crate provides:
//!
//! - exact density-matrix / Bloch-vector algebra, spectral decompositions
//!   and the entropy functionals (von Neumann, relative, binary),
//! - two-level Lindblad dynamics: an adaptive integrator with dense output,
//!   a closed-form excited-state trajectory, the nonequilibrium steady
//!   state and its effective-temperature spectrum,
//! - the entropy ledger itself plus the small-drive and strong-drive
//!   asymptotics and the critical time of the strong-drive formula,
//! - initial-state characterisation and the pre-evolution preparation
//!   protocol,
//! - the three-level ladder: Liouvillian, stiff-safe evolution, closed-form
//!   decay, effective-rate fits and the reduced effective description,
//! - drive-to-decay ratio sweeps and Bloch-disk scans with violation
//!   thresholds and zero contours,
//! - a projection-noise model for state tomography with finite shots.
//!
//! All rates are angular (rad/s); entropies are in nats.

#![forbid(unsafe_code)]
// Index loops in the numerical kernels mirror the written matrix algebra.
#![allow(clippy::needless_range_loop)]

pub mod density;
pub mod initial;
pub mod ledger;
mod linalg;
pub mod noise;
mod ode;
pub mod scan;
pub mod three_level;
pub mod two_level;

use thiserror::Error;

/// Errors shared by every operation in the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A matrix expected to be Hermitian is not, by the given amount.
    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),
    /// A density matrix trace differs from one by the given amount.
    #[error("trace differs from one by {0:.3e}")]
    TraceNotOne(f64),
    /// A matrix expected positive semidefinite has the given eigenvalue.
    #[error("matrix has negative eigenvalue {0:.3e}")]
    NotPositive(f64),
    /// A Bloch vector is longer than the unit ball allows.
    #[error("Bloch vector norm {0:.12} exceeds one")]
    BlochNorm(f64),
    /// A parameter or argument is outside its documented domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// An asymptotic formula was requested outside its validity regime.
    #[error("out of regime: {0}")]
    OutOfRegime(String),
    /// A numerical procedure failed to converge or lost its bracket.
    #[error("numerical failure: {0}")]
    Numerics(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub use density::{
    bare_energy, binary_entropy, bloch_from_density, density_from_bloch, eig2, relative_entropy,
    relative_entropy3, von_neumann_entropy, von_neumann_entropy3, BlochVector, Density2, Density3,
    EnergyConvention, Spectrum2,
};
pub use initial::{characterize_initial, prepare_by_pre_evolution, InitialStateReport};
pub use ledger::{
    asymptotic_upsilon_small, asymptotic_upsilon_ultralarge, critical_time, entropy_ledger,
    ledger_time_grid, min_upsilon, BathConvention, EntropyLedger,
};
pub use noise::{
    entropy_error, entropy_error_floor, projection_noise, simulate_shots, NoiseModel,
    NoisyTrajectory,
};
pub use scan::{
    bloch_grid_scan, ddr_sweep, find_violation_threshold, slice_bloch_vector, HeatmapResult,
    ScanOpts, SweepResult,
};
pub use three_level::{
    decay_closed_form, effective_reduction, evolve3, fit_effective_decay, liouvillian,
    steady_deviation2, steady_deviation3, steady3, tilde_spectrum, waiting_time,
    EffectiveReduction, Liouvillian8, ThreeLevelParams, TildeSpectrum, Trajectory3,
};
pub use two_level::{
    analytic_excited_trajectory, classify_regime, evolve, lindblad_rhs, steady_spectrum,
    steady_state, time_scales, Regime, SteadySpectrum, SystemParams2, TimeScales, Trajectory2,
};
