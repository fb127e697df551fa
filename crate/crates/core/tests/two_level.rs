use approx::{assert_abs_diff_eq, assert_relative_eq};
use std::f64::consts::PI;
use upsilon_core::{
    analytic_excited_trajectory, bloch_from_density, classify_regime, density_from_bloch, evolve,
    lindblad_rhs, relative_entropy, steady_spectrum, steady_state, time_scales, BlochVector,
    Density2, EnergyConvention, Regime, SystemParams2,
};

fn params(omega: f64, gamma: f64) -> SystemParams2 {
    SystemParams2::new(omega, gamma).unwrap()
}

/// (rho22, Im rho12) read off a Bloch sample.
fn pops(traj: &upsilon_core::Trajectory2, k: usize) -> (f64, f64) {
    let s = &traj.states[k];
    (0.5 * (1.0 + s.z), -0.5 * s.y)
}

#[test]
fn params_validation() {
    assert!(SystemParams2::new(-1.0, 1.0).is_err());
    assert!(SystemParams2::new(1.0, f64::NAN).is_err());
    assert!(SystemParams2::new(0.0, 0.0).is_err());
    assert_eq!(params(1.8, 1.0).ratio(), 1.8);
}

#[test]
fn regime_boundaries_are_half_open() {
    assert_eq!(classify_regime(0.1499), Regime::Small);
    assert_eq!(classify_regime(0.15), Regime::Intermediate);
    assert_eq!(classify_regime(6.2499), Regime::Intermediate);
    assert_eq!(classify_regime(6.25), Regime::Large);
    assert_eq!(classify_regime(24.999), Regime::Large);
    assert_eq!(classify_regime(25.0), Regime::UltraLarge);
}

#[test]
fn time_scales_overdamped_and_underdamped() {
    // Overdamped: real damping root, no coherence scale.
    let ts = time_scales(&params(0.1, 1.0));
    let root = (1.0f64 - 16.0 * 0.01).sqrt();
    assert_relative_eq!(ts.tau_a, 4.0 / (3.0 + root), epsilon = 1e-14);
    assert_relative_eq!(ts.tau_b, 4.0 / (3.0 - root), epsilon = 1e-14);
    assert!(ts.tau_a < ts.tau_b && ts.tau_b < 2.0 * ts.tau_a);
    assert!(ts.tau_coh.is_infinite());

    // Underdamped: equal relaxation scales, finite coherence scale.
    let ts = time_scales(&params(1.0, 1.0));
    assert_relative_eq!(ts.tau_a, 4.0 / 3.0, epsilon = 1e-14);
    assert_relative_eq!(ts.tau_b, 4.0 / 3.0, epsilon = 1e-14);
    assert_relative_eq!(ts.tau_coh, 4.0 / 15f64.sqrt(), epsilon = 1e-14);
}

#[test]
fn analytic_trajectory_spot_values() {
    // (omega, t, rho22, im_rho12), decay rate 1.
    let spots = [
        (1.8, 0.5, 0.505564254724, -0.187351627652),
        (1.8, 5.0, 0.417817885924, 0.238591366411),
        (0.01, 1.0, 0.367873038457, -0.000838302927002),
        (100.0, PI / 100.0, 0.0115937895413, 0.0098782783849),
        (0.3, 2.0, 0.136557227606, 0.0513417140728),
    ];
    for (omega, t, rho22, im12) in spots {
        let traj = analytic_excited_trajectory(&params(omega, 1.0), &[t]).unwrap();
        let (p22, i12) = pops(&traj, 0);
        assert_relative_eq!(p22, rho22, epsilon = 1e-9);
        assert_relative_eq!(i12, im12, epsilon = 1e-9);
    }
}

#[test]
fn analytic_trajectory_near_critical_damping() {
    // Just outside the fallback band around gamma = 4 omega.
    let traj = analytic_excited_trajectory(&params(0.2500001, 1.0), &[2.0]).unwrap();
    let (p22, i12) = pops(&traj, 0);
    assert_relative_eq!(p22, 0.136130336343, epsilon = 1e-7);
    assert_relative_eq!(i12, 0.0424784996568, epsilon = 1e-7);

    // Exactly critical: falls back to the integrator and stays finite.
    let traj = analytic_excited_trajectory(&params(0.25, 1.0), &[2.0]).unwrap();
    let (p22, _) = pops(&traj, 0);
    assert_relative_eq!(p22, 0.13613, epsilon = 1e-4);
}

#[test]
fn undriven_decay_and_pure_rabi() {
    // No drive: plain exponential decay of the population.
    let traj = analytic_excited_trajectory(&params(0.0, 1.0), &[1.0]).unwrap();
    assert_relative_eq!(traj.states[0].z, -0.264241117657, epsilon = 1e-10);

    // No decay: Rabi precession around x.
    let traj = analytic_excited_trajectory(&params(1.0, 0.0), &[0.0, 0.7, PI]).unwrap();
    assert_abs_diff_eq!(traj.states[1].y, 0.7f64.sin(), epsilon = 1e-12);
    assert_abs_diff_eq!(traj.states[1].z, 0.7f64.cos(), epsilon = 1e-12);
    assert_abs_diff_eq!(traj.states[2].z, -1.0, epsilon = 1e-12);
}

#[test]
fn analytic_handles_laboratory_scales() {
    // Decay 300 kHz, drive 2 pi x 85 kHz, sampled at 50 microseconds.
    let p = params(2.0 * PI * 85e3, 3e5);
    let traj = analytic_excited_trajectory(&p, &[50e-6]).unwrap();
    let (p22, _) = pops(&traj, 0);
    assert_relative_eq!(p22, 0.431863837742, epsilon = 1e-9);
}

#[test]
fn integrator_matches_closed_form() {
    let p = params(1.8, 1.0);
    let times: Vec<f64> = (0..=200).map(|k| k as f64 * 0.05).collect();
    let num = evolve(&p, &Density2::excited(), &times).unwrap();
    let exact = analytic_excited_trajectory(&p, &times).unwrap();
    for k in 0..times.len() {
        assert_abs_diff_eq!(num.states[k].y, exact.states[k].y, epsilon = 1e-8);
        assert_abs_diff_eq!(num.states[k].z, exact.states[k].z, epsilon = 1e-8);
    }
}

#[test]
fn integrator_from_coherent_start() {
    let p = params(1.8, 1.0);
    let rho0 = density_from_bloch(&BlochVector::new(0.3, -0.25, -0.4).unwrap()).unwrap();
    let traj = evolve(&p, &rho0, &[0.0, 2.0]).unwrap();
    let s = &traj.states[1];
    assert_relative_eq!(s.x, 0.110363832351, epsilon = 1e-8);
    assert_relative_eq!(s.y, -0.506645260069, epsilon = 1e-8);
    assert_relative_eq!(s.z, -0.0615267566534, epsilon = 1e-8);
}

#[test]
fn steady_state_is_a_fixed_point() {
    let p = params(1.8, 1.0);
    let rho_s = steady_state(&p).unwrap();
    let n = 1.0 + 2.0 * 1.8f64 * 1.8;
    assert_relative_eq!(rho_s.rho22(), 1.8f64 * 1.8 / n, epsilon = 1e-14);
    let b = bloch_from_density(&rho_s);
    assert_relative_eq!(b.y, -2.0 * 1.8 / n, epsilon = 1e-14);
    assert_relative_eq!(b.z, -1.0 / n, epsilon = 1e-14);
    assert_abs_diff_eq!(b.x, 0.0, epsilon = 1e-15);

    // The master equation vanishes there.
    let rhs = lindblad_rhs(&rho_s, &p);
    for row in rhs {
        for v in row {
            assert_abs_diff_eq!(v.norm(), 0.0, epsilon = 1e-14);
        }
    }

    // And the integrator stays on it.
    let traj = evolve(&p, &rho_s, &[0.0, 5.0]).unwrap();
    assert_abs_diff_eq!(traj.states[1].y, b.y, epsilon = 1e-10);
    assert_abs_diff_eq!(traj.states[1].z, b.z, epsilon = 1e-10);

    assert!(steady_state(&params(1.0, 0.0)).is_err());
}

#[test]
fn steady_relative_entropy_from_excited() {
    // D(|2><2| || rho_s) across the three regimes.
    for (omega, expect) in [
        (0.01, 18.4192391383),
        (1.8, 0.983501815863),
        (100.0, 0.693247178477),
    ] {
        let rho_s = steady_state(&params(omega, 1.0)).unwrap();
        let d = relative_entropy(&Density2::excited(), &rho_s).unwrap();
        assert_relative_eq!(d, expect, max_relative = 1e-9);
    }
}

#[test]
fn steady_spectrum_frozen_values() {
    let e = EnergyConvention::default();
    let s = steady_spectrum(&params(1.78, 1.0), &e).unwrap();
    assert_relative_eq!(s.lambda_minus, 0.75200244791, epsilon = 1e-9);
    assert_relative_eq!(s.lambda_plus, 0.24799755209, epsilon = 1e-9);
    assert_relative_eq!(s.theta_plus.sin().powi(2), 0.635216150818, epsilon = 1e-9);
    assert_relative_eq!(s.theta_minus.sin().powi(2), 0.364783849182, epsilon = 1e-9);
    assert_relative_eq!(s.beta, 4.10202737218, epsilon = 1e-9);
    let hyp = (1.0f64 + 4.0 * 1.78 * 1.78).sqrt();
    assert_relative_eq!(s.delta_e, 1.0 / hyp, epsilon = 1e-12);
    assert_relative_eq!(s.z_g * (s.lambda_minus * s.lambda_plus).sqrt(), 1.0, epsilon = 1e-12);

    assert_relative_eq!(
        steady_spectrum(&params(1.8, 1.0), &e).unwrap().lambda_minus,
        0.74975323118,
        epsilon = 1e-9
    );
    assert_relative_eq!(
        steady_spectrum(&params(4.0 * PI, 1.0), &e).unwrap().lambda_minus,
        0.539694534668,
        epsilon = 1e-9
    );
}

#[test]
fn steady_spectrum_reconstructs_steady_state() {
    for omega in [0.01, 0.2, 1.78, 10.0, 100.0] {
        let p = params(omega, 1.0);
        let s = steady_spectrum(&p, &EnergyConvention::default()).unwrap();
        let rho_s = steady_state(&p).unwrap();
        let m = rho_s.matrix();
        for (i, row) in m.iter().enumerate() {
            for (j, entry) in row.iter().enumerate() {
                let rebuilt = s.lambda_plus * s.phi_plus[i] * s.phi_plus[j].conj()
                    + s.lambda_minus * s.phi_minus[i] * s.phi_minus[j].conj();
                assert_abs_diff_eq!(rebuilt.re, entry.re, epsilon = 1e-10);
                assert_abs_diff_eq!(rebuilt.im, entry.im, epsilon = 1e-10);
            }
        }
    }
}

#[test]
fn steady_spectrum_beta_limits() {
    let e = EnergyConvention::default();
    // Weak drive: beta delta_e -> 4 ln(gamma/omega) per unit gap.
    let beta = steady_spectrum(&params(0.01, 1.0), &e).unwrap().beta;
    assert_relative_eq!(beta, 4.0 * 100f64.ln(), max_relative = 1e-3);
    // Strong drive: beta delta_e -> 4.
    let beta = steady_spectrum(&params(100.0, 1.0), &e).unwrap().beta;
    assert_relative_eq!(beta, 4.0, max_relative = 1e-3);

    assert!(steady_spectrum(&params(0.0, 1.0), &e).is_err());
    assert!(steady_spectrum(&params(1.0, 0.0), &e).is_err());
}
