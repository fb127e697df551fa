use approx::assert_abs_diff_eq;
use proptest::prelude::*;
use upsilon_core::{
    analytic_excited_trajectory, bloch_from_density, density_from_bloch, eig2, entropy_ledger,
    evolve, min_upsilon, relative_entropy, steady_spectrum, steady_state, von_neumann_entropy,
    BathConvention, BlochVector, Density2, EnergyConvention, SystemParams2,
};

fn ball_state() -> impl Strategy<Value = BlochVector> {
    (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64).prop_filter_map(
        "inside the Bloch ball",
        |(x, y, z)| {
            if x * x + y * y + z * z <= 1.0 {
                BlochVector::new(x, y, z).ok()
            } else {
                None
            }
        },
    )
}

fn drive_ratio() -> impl Strategy<Value = f64> {
    (-2.0..2.0f64).prop_map(|e| 10f64.powf(e))
}

proptest! {
    #[test]
    fn bloch_density_round_trip(b in ball_state()) {
        let rho = density_from_bloch(&b).unwrap();
        let back = bloch_from_density(&rho);
        prop_assert!((back.x - b.x).abs() < 1e-12);
        prop_assert!((back.y - b.y).abs() < 1e-12);
        prop_assert!((back.z - b.z).abs() < 1e-12);
    }

    #[test]
    fn spectral_decomposition_reconstructs_the_state(b in ball_state()) {
        let rho = density_from_bloch(&b).unwrap();
        let s = eig2(&rho);
        prop_assert!(s.lambda_minus >= -1e-12 && s.lambda_plus >= -1e-12);
        prop_assert!((s.lambda_minus + s.lambda_plus - 1.0).abs() < 1e-12);
        for i in 0..2 {
            for j in 0..2 {
                let rebuilt = s.eigvec_plus[i] * s.eigvec_plus[j].conj() * s.lambda_plus
                    + s.eigvec_minus[i] * s.eigvec_minus[j].conj() * s.lambda_minus;
                prop_assert!((rebuilt - rho.entry(i, j)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn relative_entropy_is_nonnegative(a in ball_state(), b in ball_state()) {
        let rho = density_from_bloch(&a).unwrap();
        let phi = density_from_bloch(&b).unwrap();
        let d = relative_entropy(&rho, &phi).unwrap();
        prop_assert!(d >= -1e-12);
        let self_d = relative_entropy(&rho, &rho).unwrap();
        prop_assert!(self_d.abs() < 1e-10);
    }

    #[test]
    fn entropy_stays_in_range(b in ball_state()) {
        let rho = density_from_bloch(&b).unwrap();
        let s = von_neumann_entropy(&rho).unwrap();
        prop_assert!((-1e-12..=std::f64::consts::LN_2 + 1e-12).contains(&s));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn integrator_matches_the_closed_form(ratio in drive_ratio(), t in 0.01..5.0f64) {
        let p = SystemParams2::new(ratio, 1.0).unwrap();
        let times = [0.0, t];
        let numeric = evolve(&p, &Density2::excited(), &times).unwrap();
        let exact = analytic_excited_trajectory(&p, &times).unwrap();
        let n = &numeric.states[1];
        let e = &exact.states[1];
        prop_assert!((n.x - e.x).abs() < 1e-6);
        prop_assert!((n.y - e.y).abs() < 1e-6);
        prop_assert!((n.z - e.z).abs() < 1e-6);
        prop_assert!(n.norm() <= 1.0 + 1e-9);
    }

    #[test]
    fn stationary_state_is_a_fixed_point(ratio in drive_ratio()) {
        let p = SystemParams2::new(ratio, 1.0).unwrap();
        let rho_s = steady_state(&p).unwrap();
        let traj = evolve(&p, &rho_s, &[0.0, 3.0]).unwrap();
        let start = &traj.states[0];
        let end = &traj.states[1];
        prop_assert!((end.x - start.x).abs() < 1e-8);
        prop_assert!((end.y - start.y).abs() < 1e-8);
        prop_assert!((end.z - start.z).abs() < 1e-8);
    }

    #[test]
    fn distance_to_stationarity_contracts(b in ball_state(), ratio in drive_ratio()) {
        let p = SystemParams2::new(ratio, 1.0).unwrap();
        let rho_s = steady_state(&p).unwrap();
        let traj = evolve(&p, &density_from_bloch(&b).unwrap(), &[0.0, 0.5, 1.5, 4.0]).unwrap();
        let mut prev = f64::INFINITY;
        for k in 0..traj.times.len() {
            let d = relative_entropy(&traj.density_at(k).unwrap(), &rho_s).unwrap();
            prop_assert!(d <= prev + 1e-9);
            prev = d;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn ledger_identities_hold(b in ball_state(), ratio in drive_ratio()) {
        let p = SystemParams2::new(ratio, 1.0).unwrap();
        let rho0 = density_from_bloch(&b).unwrap();
        let times = [0.0, 0.7, 2.1];
        let traj = evolve(&p, &rho0, &times).unwrap();
        for convention in [BathConvention::BareEigenEnergy, BathConvention::EffectiveBasis] {
            let ledger = entropy_ledger(&traj, convention, &EnergyConvention::default()).unwrap();
            prop_assert_eq!(ledger.upsilon[0], 0.0);
            for k in 0..times.len() {
                let total = ledger.sigma_sys[k] + ledger.sigma_bath[k];
                prop_assert!((ledger.sigma_total[k] - total).abs() < 1e-12);
                if ledger.rel_entropy[k].is_finite() {
                    let upsilon = ledger.sigma_total[k] - ledger.rel_entropy[k];
                    prop_assert!((ledger.upsilon[k] - upsilon).abs() < 1e-12);
                }
            }
            let (min, t_star) = min_upsilon(&ledger).unwrap();
            prop_assert!(min <= 1e-12);
            prop_assert!((0.0..=times[2]).contains(&t_star));
        }
    }

    #[test]
    fn transverse_mirror_symmetry(b in ball_state(), ratio in drive_ratio()) {
        let p = SystemParams2::new(ratio, 1.0).unwrap();
        let times = [0.0, 0.4, 1.3];
        let rho = density_from_bloch(&b).unwrap();
        let mirrored =
            density_from_bloch(&BlochVector::new(-b.x, b.y, b.z).unwrap()).unwrap();
        let ledger_a = entropy_ledger(
            &evolve(&p, &rho, &times).unwrap(),
            BathConvention::default(),
            &EnergyConvention::default(),
        )
        .unwrap();
        let ledger_b = entropy_ledger(
            &evolve(&p, &mirrored, &times).unwrap(),
            BathConvention::default(),
            &EnergyConvention::default(),
        )
        .unwrap();
        for k in 0..times.len() {
            if ledger_a.upsilon[k].is_finite() {
                prop_assert!((ledger_a.upsilon[k] - ledger_b.upsilon[k]).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn effective_temperature_decreases_with_drive() {
    let convention = EnergyConvention::default();
    let mut prev = f64::INFINITY;
    for k in 0..61 {
        let ratio = 10f64.powf(-2.0 + 4.0 * k as f64 / 60.0);
        let p = SystemParams2::new(ratio, 1.0).unwrap();
        let beta = steady_spectrum(&p, &convention).unwrap().beta;
        assert!(beta < prev, "beta must fall as the drive grows (ratio {ratio})");
        assert!(beta > 4.0, "beta stays above its strong-drive limit");
        prev = beta;
    }
}

#[test]
fn ledger_minimum_never_exceeds_grid_minimum() {
    let p = SystemParams2::new(1.8, 1.0).unwrap();
    let times: Vec<f64> = (0..=200).map(|k| 0.05 * k as f64).collect();
    let traj = analytic_excited_trajectory(&p, &times).unwrap();
    let ledger =
        entropy_ledger(&traj, BathConvention::default(), &EnergyConvention::default()).unwrap();
    let grid_min = ledger
        .upsilon
        .iter()
        .copied()
        .filter(|u| u.is_finite())
        .fold(f64::INFINITY, f64::min);
    let (min, _) = min_upsilon(&ledger).unwrap();
    assert!(min <= grid_min + 1e-12);
    assert_abs_diff_eq!(min, grid_min, epsilon = 1e-3);
}
