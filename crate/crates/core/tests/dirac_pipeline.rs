use std::time::Instant;

use hbarcon::dirac::{compare_evolutions, consistency_iteration, constrained_evolution, DiracOptions};
use hbarcon::lift::monomial_basis;
use hbarcon::{parse, GradedPolynomial, RationalFunction, SymplecticContext, Variable};

fn expected(f: &GradedPolynomial, a: &str, b: &str) -> GradedPolynomial {
    let ctx = f.ctx();
    let a = parse(a, ctx).unwrap();
    let b = parse(b, ctx).unwrap();
    &(&a * &f.derivative(Variable::Phi(0))) - &(&b * &f.derivative(Variable::Phi(1)))
}

fn reproduce(h: &str, a: &str, b: &str) -> std::time::Duration {
    let ctx = SymplecticContext::standard(1).unwrap();
    let start = Instant::now();
    let analysis = consistency_iteration(&parse(h, &ctx).unwrap(), &DiracOptions::default()).unwrap();
    for f in monomial_basis(&ctx, 4) {
        let ev = constrained_evolution(&f, &analysis).unwrap();
        assert_eq!(ev.value, RationalFunction::from_poly(expected(&f, a, b)), "F = {f}");
        assert!(ev.value.is_polynomial(), "F = {f}: {}", ev.value);
        assert!(ev.multipliers_irrelevant, "F = {f}");
    }
    start.elapsed()
}

#[test]
fn harmonic_oscillator_flow() {
    let t = reproduce("1/2*p^2 + 1/2*q^2", "p", "q");
    eprintln!("harmonic oscillator: {t:?}");
}

#[test]
fn quartic_flow() {
    let t = reproduce("1/2*p^2 + 1/4*q^4", "3/2*p", "q^3");
    eprintln!("quartic: {t:?}");
}

#[test]
fn verdicts() {
    let ctx = SymplecticContext::standard(1).unwrap();
    let ho = consistency_iteration(&parse("1/2*p^2 + 1/2*q^2", &ctx).unwrap(), &DiracOptions::default()).unwrap();
    for f in monomial_basis(&ctx, 4) {
        let c = compare_evolutions(&ho, &f, None).unwrap();
        assert!(c.difference.is_zero(), "F = {f}: {}", c.difference);
        assert!(c.equal);
    }
    let quartic = consistency_iteration(&parse("1/2*p^2 + 1/4*q^4", &ctx).unwrap(), &DiracOptions::default()).unwrap();
    let c = compare_evolutions(&quartic, &parse("q", &ctx).unwrap(), None).unwrap();
    assert_eq!(c.difference.to_string(), "1/2*p");
    assert!(!c.equal);
}

#[test]
fn free_particle_agrees_with_moyal() {
    let ctx = SymplecticContext::standard(1).unwrap();
    let a = consistency_iteration(&parse("1/2*p^2", &ctx).unwrap(), &DiracOptions::default()).unwrap();
    let c = compare_evolutions(&a, &parse("q", &ctx).unwrap(), None).unwrap();
    assert_eq!(c.constrained.to_string(), "p");
    assert!(c.equal);
}
