use approx::{assert_abs_diff_eq, assert_relative_eq};
use upsilon_core::{
    analytic_excited_trajectory, bloch_grid_scan, ddr_sweep, density_from_bloch, entropy_ledger,
    find_violation_threshold, ledger_time_grid, min_upsilon, slice_bloch_vector, BathConvention,
    Density2, EnergyConvention, ScanOpts, SystemParams2,
};

#[test]
fn scan_defaults() {
    let opts = ScanOpts::default();
    assert_eq!(opts.horizon_factor, 30.0);
    assert_eq!(opts.per_scale, 400);
}

#[test]
fn slice_states() {
    let b = slice_bloch_vector(0.3, 0.5).unwrap();
    assert_eq!(b.x, 0.0);
    assert_abs_diff_eq!(b.y, -0.4, epsilon = 1e-15);
    assert_eq!(b.z, 0.3);

    let edge = slice_bloch_vector(0.5, 0.5).unwrap();
    assert_eq!(edge.y, 0.0);

    let pole = slice_bloch_vector(-1.0, 1.0).unwrap();
    assert_eq!(pole.y, 0.0);
    assert_eq!(pole.z, -1.0);

    assert!(slice_bloch_vector(0.0, 1.5).is_err());
    assert!(slice_bloch_vector(0.0, -0.1).is_err());
    assert!(slice_bloch_vector(0.6, 0.5).is_err());
}

#[test]
fn sweep_single_point_matches_direct_ledger() {
    let opts = ScanOpts::default();
    let sweep = ddr_sweep(&Density2::excited(), &[1.8], &opts).unwrap();

    let p = SystemParams2::new(1.8, 1.0).unwrap();
    let horizon = opts.horizon_factor * (1.0 / p.gamma()).max(1.0 / p.omega());
    let grid = ledger_time_grid(&p, horizon, opts.per_scale);
    let traj = analytic_excited_trajectory(&p, &grid).unwrap();
    let ledger =
        entropy_ledger(&traj, BathConvention::default(), &EnergyConvention::default()).unwrap();
    let (min, t_star) = min_upsilon(&ledger).unwrap();

    assert_abs_diff_eq!(sweep.min_upsilon[0], min, epsilon = 1e-14);
    assert_abs_diff_eq!(sweep.t_star[0], t_star, epsilon = 1e-14);
}

#[test]
fn sweep_across_the_regime_span() {
    let sweep = ddr_sweep(&Density2::excited(), &[0.01, 100.0], &ScanOpts::default()).unwrap();
    assert!(sweep.min_upsilon[0] >= -1e-9);
    assert!(sweep.min_upsilon[0] <= 0.0);
    assert_abs_diff_eq!(sweep.min_upsilon[1], -0.449, epsilon = 2e-3);
    assert_abs_diff_eq!(sweep.t_star[1] * 100.0, 3.158, epsilon = 2e-2);
}

#[test]
fn sweep_rejects_out_of_range_ratios() {
    assert!(ddr_sweep(&Density2::excited(), &[2.0, 1e-4], &ScanOpts::default()).is_err());
    assert!(ddr_sweep(&Density2::excited(), &[2e3], &ScanOpts::default()).is_err());
}

#[test]
fn sweep_csv_schema() {
    let sweep = ddr_sweep(&Density2::excited(), &[1.8], &ScanOpts::default()).unwrap();
    let csv = sweep.to_csv();
    assert!(csv.starts_with("ratio,min_upsilon,t_star\n"));
    assert_eq!(csv.lines().count(), 2);
    assert!(csv.lines().nth(1).unwrap().starts_with("1.8,"));
    assert_eq!(csv, sweep.to_csv());
}

#[test]
fn threshold_of_the_excited_state() {
    let thr =
        find_violation_threshold(&Density2::excited(), 25.0, 100.0, &ScanOpts::default()).unwrap();
    assert_relative_eq!(thr, 62.9011650743, max_relative = 1e-2);
}

#[test]
fn threshold_is_stable_under_grid_refinement() {
    let coarse = ScanOpts::default();
    let fine = ScanOpts {
        per_scale: 800,
        ..ScanOpts::default()
    };
    let a = find_violation_threshold(&Density2::excited(), 55.0, 70.0, &coarse).unwrap();
    let b = find_violation_threshold(&Density2::excited(), 55.0, 70.0, &fine).unwrap();
    assert_relative_eq!(a, b, max_relative = 0.02);
}

#[test]
fn threshold_bracket_errors() {
    let no_violation =
        find_violation_threshold(&Density2::excited(), 1.0, 2.0, &ScanOpts::default());
    assert!(no_violation.unwrap_err().to_string().contains("no violation"));

    let marker = density_from_bloch(&slice_bloch_vector(-0.604, 0.626).unwrap()).unwrap();
    let already = find_violation_threshold(&marker, 1.78, 10.0, &ScanOpts::default());
    assert!(already.unwrap_err().to_string().contains("already violated"));

    assert!(find_violation_threshold(&Density2::excited(), 2.0, 2.0, &ScanOpts::default()).is_err());
    assert!(find_violation_threshold(&Density2::excited(), 5e3, 1e4, &ScanOpts::default()).is_err());
}

#[test]
fn grid_scan_shape_and_artifacts() {
    let p = SystemParams2::new(1.8, 1.0).unwrap();
    let z_grid = [-1.0, -0.5, 0.0, 0.5, 1.0];
    let r_grid = [0.0, 0.25, 0.5, 0.75, 1.0];
    let map = bloch_grid_scan(&p, &z_grid, &r_grid, &ScanOpts::default()).unwrap();

    assert_eq!(map.min_upsilon.len(), 5);
    assert!(map.min_upsilon.iter().all(|row| row.len() == 5));
    let mut valid = 0;
    for (iz, &z) in z_grid.iter().enumerate() {
        for (ir, &r) in r_grid.iter().enumerate() {
            let cell = map.min_upsilon[iz][ir];
            if z.abs() <= r {
                assert!(cell.is_finite(), "cell ({z}, {r}) should be finite");
                assert!(cell <= 1e-15, "minimum balance cannot exceed zero");
                valid += 1;
            } else {
                assert!(cell.is_nan(), "cell ({z}, {r}) lies outside the ball");
            }
        }
    }
    assert_eq!(valid, 13);

    let csv = map.to_csv();
    assert!(csv.starts_with("z,r,min_upsilon\n"));
    assert_eq!(csv.lines().count(), 1 + valid);

    let json: serde_json::Value = serde_json::from_str(&map.to_json().unwrap()).unwrap();
    assert_eq!(json["omega"], 1.8);
    assert_eq!(json["gamma"], 1.0);
    assert_eq!(json["z_grid"].as_array().unwrap().len(), 5);
    assert!(json["min_upsilon"][0][0].is_null());
    assert!(json["min_upsilon"][2][0].is_number());
    assert!(json["zero_contour"].is_array());

    let again = bloch_grid_scan(&p, &z_grid, &r_grid, &ScanOpts::default()).unwrap();
    assert_eq!(csv, again.to_csv());
    assert_eq!(map.to_json().unwrap(), again.to_json().unwrap());
}

#[test]
fn grid_scan_validation() {
    let p = SystemParams2::new(1.8, 1.0).unwrap();
    let opts = ScanOpts::default();
    assert!(bloch_grid_scan(&p, &[], &[0.0, 1.0], &opts).is_err());
    assert!(bloch_grid_scan(&p, &[0.0, 0.0], &[0.0, 1.0], &opts).is_err());
    assert!(bloch_grid_scan(&p, &[0.0, 1.0], &[1.0, 0.5], &opts).is_err());
    assert!(bloch_grid_scan(&p, &[0.0, 1.0], &[0.0, 1.5], &opts).is_err());
    assert!(bloch_grid_scan(&p, &[0.0, f64::NAN], &[0.0, 1.0], &opts).is_err());
    assert!(bloch_grid_scan(&p, &[-2.0, 0.0], &[0.0, 1.0], &opts).is_err());
}
