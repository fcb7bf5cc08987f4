use std::f64::consts::PI;

use hbarcon::wigner::{check_normalization, marginal_error, quantisation_rule_check, wigner_transform, HermiteState};

#[test]
fn hermite_levels_meet_tolerances() {
    for hbar in [1.0, 0.1] {
        for level in [0, 1] {
            let s = HermiteState::new(level, hbar).unwrap();
            let (psi, axis) = s.default_grid().unwrap();
            let rho = wigner_transform(&psi, &axis).unwrap();
            assert!(rho.imaginary_residue < 1e-10);
            let n = check_normalization(&rho);
            assert!(n.integral_error < 1e-6, "{level} {hbar}: {n:?}");
            assert!(n.square_error < 1e-4, "{level} {hbar}: {n:?}");
            assert!(marginal_error(&rho, &psi) < 1e-6);
            if level == 1 {
                let origin = rho.nearest(0.0, 0.0);
                assert!(origin < 0.0);
                assert!((origin + 1.0 / (PI * hbar)).abs() < 1e-3);
            }
            let q = quantisation_rule_check(&psi, &axis).unwrap();
            assert!(q.lhs_identity_error < 1e-6, "{q:?}");
            assert!(q.rhs_identity_error < 1e-6, "{q:?}");
            assert!(q.gap > 0.1 * q.lhs_norm);
        }
    }
}

#[test]
fn doubling_the_grid_changes_little() {
    let s = HermiteState::new(1, 1.0).unwrap();
    let l = s.default_half_width();
    let coarse = s.sample(-l, l, 257).unwrap();
    let fine = s.sample(-l, l, 513).unwrap();
    let a = check_normalization(
        &wigner_transform(&coarse, &hbarcon::wigner::MomentumAxis::symmetric(l, 129)).unwrap(),
    );
    let b = check_normalization(&wigner_transform(&fine, &hbarcon::wigner::MomentumAxis::symmetric(l, 257)).unwrap());
    assert!((a.integral - b.integral).abs() < 1e-5);
    assert!((a.integral_of_square - b.integral_of_square).abs() < 1e-3);
}
