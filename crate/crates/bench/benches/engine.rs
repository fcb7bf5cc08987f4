use criterion::{black_box, criterion_group, criterion_main, Criterion};

use hbarcon::brackets::moyal;
use hbarcon::dirac::{compare_evolutions, consistency_iteration, DiracOptions};
use hbarcon::lift::{match_coefficients, monomial_basis};
use hbarcon::wigner::{wigner_transform, HermiteState, MomentumAxis};
use hbarcon::{parse, SymplecticContext};

fn brackets(c: &mut Criterion) {
    let ctx = SymplecticContext::standard(2).unwrap();
    let f = parse("q0^3*p1 + 2*q1^2*p0^2 - p0*p1", &ctx).unwrap();
    let g = parse("p0^3 + q0*q1*p1^2 + 1/2*q1^4", &ctx).unwrap();
    c.bench_function("moyal n=2 degree 4", |b| b.iter(|| moyal(black_box(&f), black_box(&g), None).unwrap()));
}

fn dirac(c: &mut Criterion) {
    let ctx = SymplecticContext::standard(1).unwrap();
    let opts = DiracOptions::default();
    for (name, h) in [("harmonic", "1/2*p^2 + 1/2*q^2"), ("quartic", "1/2*p^2 + 1/4*q^4")] {
        let h = parse(h, &ctx).unwrap();
        c.bench_function(&format!("dirac analysis {name}"), |b| {
            b.iter(|| consistency_iteration(black_box(&h), &opts).unwrap())
        });
        let analysis = consistency_iteration(&h, &opts).unwrap();
        let basis = monomial_basis(&ctx, 4);
        c.bench_function(&format!("compare basis {name}"), |b| {
            b.iter(|| {
                for f in &basis {
                    compare_evolutions(&analysis, f, None).unwrap();
                }
            })
        });
    }
    let ctx2 = SymplecticContext::standard(2).unwrap();
    let coupled = parse("1/2*p0^2 + 1/2*p1^2 + 1/2*q0^2 + q1^2 + 1/2*q0*q1", &ctx2).unwrap();
    c.bench_function("dirac analysis coupled n=2", |b| {
        b.iter(|| consistency_iteration(black_box(&coupled), &opts).unwrap())
    });
}

fn coefficients(c: &mut Criterion) {
    let ctx = SymplecticContext::standard(1).unwrap();
    let h = parse("1/2*p^2 + 1/4*q^4", &ctx).unwrap();
    let basis = monomial_basis(&ctx, 5);
    c.bench_function("match coefficients quartic", |b| {
        b.iter(|| match_coefficients(black_box(&h), 2, &basis).unwrap())
    });
}

fn wigner(c: &mut Criterion) {
    let state = HermiteState::new(1, 1.0).unwrap();
    let l = state.default_half_width();
    let psi = state.sample(-l, l, 257).unwrap();
    let axis = MomentumAxis::symmetric(l, 65);
    let mut group = c.benchmark_group("wigner");
    group.sample_size(20);
    group.bench_function("transform 257x65", |b| b.iter(|| wigner_transform(black_box(&psi), &axis).unwrap()));
    group.finish();
}

criterion_group!(benches, brackets, dirac, coefficients, wigner);
criterion_main!(benches);
