mod common;

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{phase_vars, random_poly};
use hbarcon::brackets::{epb, pb};
use hbarcon::lift::{
    lift_classical, lift_moyal, match_coefficients, moyal_target, monomial_basis, substitute_operator, MatchVerdict,
};
use hbarcon::{parse, GradedPolynomial, Scalar, SymplecticContext};

#[test]
fn lift_reproduces_hamiltonian_flow() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for n in [1, 2] {
        let ctx = SymplecticContext::standard(n).unwrap();
        for _ in 0..10 {
            let h = random_poly(&mut rng, &ctx, &phase_vars(&ctx), 5, 4);
            let lifted = lift_classical(&h, true).unwrap();
            for a in 0..ctx.dim() {
                let phi = GradedPolynomial::phi(&ctx, a);
                assert_eq!(pb(&phi, &h).unwrap(), epb(&phi, &lifted), "H = {h}");
            }
        }
    }
}

#[test]
fn liouville_anchor() {
    let ctx = SymplecticContext::standard(1).unwrap();
    let lifted = lift_classical(&parse("1/2*p^2 + 1/2*q^2", &ctx).unwrap(), false).unwrap();
    for rho in monomial_basis(&ctx, 4) {
        let expect = (&(&parse("p", &ctx).unwrap() * &rho.derivative(hbarcon::Variable::Phi(0)))
            - &(&parse("q", &ctx).unwrap() * &rho.derivative(hbarcon::Variable::Phi(1))))
            .scale(&-Scalar::i());
        assert_eq!(substitute_operator(&lifted, &rho).unwrap(), expect);
    }
}

#[test]
fn quartic_coefficient_is_unique() {
    let ctx = SymplecticContext::standard(1).unwrap();
    let h = parse("1/2*p^2 + 1/4*q^4", &ctx).unwrap();
    let start = Instant::now();
    let basis = monomial_basis(&ctx, 5);
    let report = match_coefficients(&h, 2, &basis).unwrap();
    assert_eq!(report.verdict, MatchVerdict::Unique);
    assert!(report.verified_on_basis);
    let k1 = &report.kappas[0];
    assert_eq!(k1.value, Some(Scalar::frac(1, 24)));
    // independent re-check through the public pieces
    let coeffs = [report.kappas[0].value.clone().unwrap()];
    let series = lift_moyal(&h, 2, false, Some(&coeffs)).unwrap().to_polynomial();
    for rho in &basis {
        let lhs = substitute_operator(&series, rho).unwrap();
        let rhs = moyal_target(&h, rho, 2).unwrap();
        assert_eq!(lhs.truncate_hbar(2), rhs.truncate_hbar(2), "rho = {rho}");
    }
    eprintln!("matching took {:?}", start.elapsed());
}
