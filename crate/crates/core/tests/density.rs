use approx::{assert_abs_diff_eq, assert_relative_eq};
use num_complex::Complex64 as C;
use upsilon_core::{
    bare_energy, binary_entropy, bloch_from_density, density_from_bloch, eig2, relative_entropy,
    relative_entropy3, von_neumann_entropy, von_neumann_entropy3, BlochVector, Density2, Density3,
    EnergyConvention, Error,
};

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

fn bloch(x: f64, y: f64, z: f64) -> BlochVector {
    BlochVector::new(x, y, z).unwrap()
}

fn state(x: f64, y: f64, z: f64) -> Density2 {
    density_from_bloch(&bloch(x, y, z)).unwrap()
}

#[test]
fn basis_states_have_expected_entries() {
    let e = Density2::excited();
    assert_eq!(e.rho22(), 1.0);
    assert_eq!(e.entry(0, 0), c(0.0, 0.0));
    let g = Density2::ground();
    assert_eq!(g.rho22(), 0.0);
    assert_eq!(g.entry(0, 0), c(1.0, 0.0));
}

#[test]
fn constructor_rejects_bad_matrices() {
    let non_hermitian = Density2::new([[c(0.5, 0.0), c(0.2, 0.0)], [c(0.3, 0.0), c(0.5, 0.0)]]);
    assert!(matches!(non_hermitian, Err(Error::NotHermitian(_))));

    let bad_trace = Density2::new([[c(0.7, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.5, 0.0)]]);
    assert!(matches!(bad_trace, Err(Error::TraceNotOne(_))));

    let not_positive = Density2::new([[c(1.2, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-0.2, 0.0)]]);
    assert!(matches!(not_positive, Err(Error::NotPositive(_))));
}

#[test]
fn bloch_round_trip_is_exact() {
    for (x, y, z) in [
        (0.3, -0.25, -0.4),
        (0.0, 0.0, 1.0),
        (0.0, -0.164499, -0.604),
        (0.1, 0.2, 0.3),
    ] {
        let back = bloch_from_density(&state(x, y, z));
        assert_abs_diff_eq!(back.x, x, epsilon = 1e-15);
        assert_abs_diff_eq!(back.y, y, epsilon = 1e-15);
        assert_abs_diff_eq!(back.z, z, epsilon = 1e-15);
    }
}

#[test]
fn bloch_vector_rejects_long_vectors() {
    assert!(BlochVector::new(0.8, 0.8, 0.0).is_err());
    assert!(BlochVector::new(0.0, 0.0, 1.0).is_ok());
}

#[test]
fn coherence_sign_convention() {
    // x couples to Re rho_12, y to -Im rho_12.
    let rho = state(0.6, 0.0, 0.0);
    assert_abs_diff_eq!(rho.entry(0, 1).re, 0.3, epsilon = 1e-15);
    let rho = state(0.0, 0.6, 0.0);
    assert_abs_diff_eq!(rho.entry(0, 1).im, -0.3, epsilon = 1e-15);
}

#[test]
fn eig2_eigenvalues_and_reconstruction() {
    let rho = state(0.3, -0.25, -0.4);
    let s = eig2(&rho);
    let norm = (0.3f64 * 0.3 + 0.25 * 0.25 + 0.4 * 0.4).sqrt();
    assert_relative_eq!(s.lambda_plus, 0.5 * (1.0 + norm), epsilon = 1e-14);
    assert_relative_eq!(s.lambda_minus, 0.5 * (1.0 - norm), epsilon = 1e-14);
    assert_relative_eq!(s.lambda_plus + s.lambda_minus, 1.0, epsilon = 1e-14);

    // sum lambda |v><v| must rebuild the matrix.
    let m = rho.matrix();
    for (i, row) in m.iter().enumerate() {
        for (j, entry) in row.iter().enumerate() {
            let rebuilt = s.lambda_plus * s.eigvec_plus[i] * s.eigvec_plus[j].conj()
                + s.lambda_minus * s.eigvec_minus[i] * s.eigvec_minus[j].conj();
            assert_abs_diff_eq!(rebuilt.re, entry.re, epsilon = 1e-12);
            assert_abs_diff_eq!(rebuilt.im, entry.im, epsilon = 1e-12);
        }
    }
}

#[test]
fn eig2_diagonal_branch_orders_by_population() {
    let s = eig2(&Density2::excited());
    assert_eq!(s.lambda_plus, 1.0);
    assert_eq!(s.eigvec_plus, [c(0.0, 0.0), c(1.0, 0.0)]);

    let s = eig2(&Density2::ground());
    assert_eq!(s.lambda_plus, 1.0);
    assert_eq!(s.eigvec_plus, [c(1.0, 0.0), c(0.0, 0.0)]);
}

#[test]
fn von_neumann_entropy_values() {
    assert_abs_diff_eq!(von_neumann_entropy(&Density2::excited()).unwrap(), 0.0, epsilon = 1e-15);
    assert_relative_eq!(
        von_neumann_entropy(&state(0.0, 0.0, 0.0)).unwrap(),
        std::f64::consts::LN_2,
        epsilon = 1e-14
    );
    // Populations {0.8727, 0.1273} along z.
    let rho = state(0.0, 0.0, 0.7454);
    assert_relative_eq!(von_neumann_entropy(&rho).unwrap(), 0.38122169769, epsilon = 1e-9);
    // The tomography-card state of the heatmap marker.
    let rho = state(0.0, 0.170, -0.604);
    assert_relative_eq!(von_neumann_entropy(&rho).unwrap(), 0.480763, epsilon = 1e-5);
}

#[test]
fn relative_entropy_basics() {
    let a = state(0.3, -0.25, -0.4);
    let b = state(0.0, 0.1, 0.2);
    assert_abs_diff_eq!(relative_entropy(&a, &a).unwrap(), 0.0, epsilon = 1e-12);
    assert!(relative_entropy(&a, &b).unwrap() > 0.0);
    // Pure reference without support on the state: infinite.
    let d = relative_entropy(&state(0.0, 0.0, 0.0), &Density2::excited()).unwrap();
    assert!(d.is_infinite() && d > 0.0);
    // Aligned pure states: zero.
    assert_abs_diff_eq!(
        relative_entropy(&Density2::excited(), &Density2::excited()).unwrap(),
        0.0,
        epsilon = 1e-12
    );
}

#[test]
fn binary_entropy_values_and_domain() {
    assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
    assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
    assert_relative_eq!(binary_entropy(0.5).unwrap(), std::f64::consts::LN_2, epsilon = 1e-14);
    assert_relative_eq!(binary_entropy(0.1).unwrap(), 0.325082973391, epsilon = 1e-9);
    assert!(binary_entropy(-0.1).is_err());
    assert!(binary_entropy(1.1).is_err());
}

#[test]
fn energy_convention_and_bare_energy() {
    let e = EnergyConvention::default();
    assert_eq!(e.gap(), 1.0);
    assert!(EnergyConvention::new(1.0, 0.0).is_err());
    let e2 = EnergyConvention::new(-0.5, 0.5).unwrap();
    assert_eq!(e2.gap(), 1.0);

    assert_abs_diff_eq!(bare_energy(&Density2::excited(), &e), 1.0, epsilon = 1e-15);
    assert_abs_diff_eq!(bare_energy(&Density2::ground(), &e), 0.0, epsilon = 1e-15);
    // rho22 = (1+z)/2 carries the gap.
    assert_abs_diff_eq!(bare_energy(&state(0.0, 0.0, -0.604), &e), 0.198, epsilon = 1e-12);
}

#[test]
fn density3_construction_and_populations() {
    for k in 0..3 {
        let rho = Density3::basis_state(k);
        let pops = rho.populations();
        for (i, p) in pops.iter().enumerate() {
            assert_eq!(*p, if i == k { 1.0 } else { 0.0 });
        }
        assert_abs_diff_eq!(von_neumann_entropy3(&rho).unwrap(), 0.0, epsilon = 1e-12);
    }

    let third = c(1.0 / 3.0, 0.0);
    let zero = c(0.0, 0.0);
    let mixed = Density3::new([
        [third, zero, zero],
        [zero, third, zero],
        [zero, zero, third],
    ])
    .unwrap();
    assert_relative_eq!(von_neumann_entropy3(&mixed).unwrap(), 3f64.ln(), epsilon = 1e-12);

    let not_positive = Density3::new([
        [c(1.5, 0.0), zero, zero],
        [zero, c(-0.5, 0.0), zero],
        [zero, zero, zero],
    ]);
    assert!(matches!(not_positive, Err(Error::NotPositive(_))));
}

#[test]
fn relative_entropy3_basics() {
    let zero = c(0.0, 0.0);
    let rho = Density3::new([
        [c(0.5, 0.0), c(0.1, 0.05), zero],
        [c(0.1, -0.05), c(0.3, 0.0), zero],
        [zero, zero, c(0.2, 0.0)],
    ])
    .unwrap();
    assert_abs_diff_eq!(relative_entropy3(&rho, &rho).unwrap(), 0.0, epsilon = 1e-10);
    let d = relative_entropy3(&Density3::basis_state(0), &Density3::basis_state(1)).unwrap();
    assert!(d.is_infinite() && d > 0.0);
}
