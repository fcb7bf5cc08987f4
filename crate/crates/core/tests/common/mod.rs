#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use hbarcon::{Ctx, GradedPolynomial, Scalar, Variable};

pub fn coeff(rng: &mut ChaCha8Rng) -> Scalar {
    loop {
        let c = Scalar::frac(rng.gen_range(-5..=5), rng.gen_range(1..=4));
        if !c.is_zero() {
            return c;
        }
    }
}

/// Random polynomial in the given generators with total degree ≤ `max_deg`.
pub fn random_poly(rng: &mut ChaCha8Rng, ctx: &Ctx, vars: &[Variable], max_deg: u32, terms: usize) -> GradedPolynomial {
    let mut acc = GradedPolynomial::zero(ctx);
    for _ in 0..terms {
        let deg = rng.gen_range(0..=max_deg);
        let mut factors = Vec::new();
        for _ in 0..deg {
            factors.push((vars[rng.gen_range(0..vars.len())], 1));
        }
        acc = &acc + &GradedPolynomial::monomial(ctx, coeff(rng), &factors);
    }
    acc
}

pub fn phase_vars(ctx: &Ctx) -> Vec<Variable> {
    (0..ctx.dim()).map(Variable::Phi).collect()
}

pub fn extended_vars(ctx: &Ctx) -> Vec<Variable> {
    let mut v: Vec<Variable> = (0..ctx.dim()).map(Variable::Phi).collect();
    v.extend((0..ctx.dim()).map(Variable::Lambda));
    v.push(Variable::Hbar);
    v
}

pub fn odd_vars(ctx: &Ctx) -> Vec<Variable> {
    let mut v: Vec<Variable> = (0..ctx.dim()).map(Variable::C).collect();
    v.extend((0..ctx.dim()).map(Variable::CBar));
    v
}
