//! Proptest strategies shared by the unit tests.

use proptest::prelude::*;

use crate::algebra::{GradedPolynomial, SymplecticContext, Variable};
use crate::scalar::Scalar;

fn coeff() -> impl Strategy<Value = Scalar> {
    (-4i64..=4, 1i64..=3).prop_map(|(a, b)| Scalar::frac(a, b))
}

/// Random `φ`-only polynomial in `n` degrees of freedom, degree ≤ `max_deg`.
pub fn arb_phase_poly(n: usize, max_deg: u32) -> impl Strategy<Value = GradedPolynomial> {
    let dim = 2 * n;
    let term = (coeff(), proptest::collection::vec(0..=max_deg, dim));
    proptest::collection::vec(term, 1..=4).prop_map(move |terms| {
        let ctx = SymplecticContext::standard(n).unwrap();
        let mut acc = GradedPolynomial::zero(&ctx);
        for (c, mut exps) in terms {
            // cap total degree
            while exps.iter().sum::<u32>() > max_deg {
                let i = exps.iter().position(|&e| e > 0).unwrap();
                exps[i] -= 1;
            }
            let factors: Vec<(Variable, u32)> = exps
                .iter()
                .enumerate()
                .map(|(a, &e)| (Variable::Phi(a), e))
                .collect();
            acc = &acc + &GradedPolynomial::monomial(&ctx, c, &factors);
        }
        acc
    })
}

/// Random homogeneous polynomial over every generator; returns the
/// polynomial and whether it is odd.
pub fn arb_poly_with_parity(n: usize) -> impl Strategy<Value = (GradedPolynomial, bool)> {
    let dim = 2 * n;
    let nghost = 2 * dim;
    let term = (
        coeff(),
        proptest::collection::vec(0u32..=2, 2 * dim + 1),
        proptest::collection::vec(any::<bool>(), nghost),
    );
    (any::<bool>(), proptest::collection::vec(term, 1..=3)).prop_map(move |(odd, terms)| {
        let ctx = SymplecticContext::standard(n).unwrap();
        let mut acc = GradedPolynomial::zero(&ctx);
        for (c, exps, mut ghosts) in terms {
            let count = ghosts.iter().filter(|&&g| g).count();
            if (count % 2 == 1) != odd {
                // flip the first slot to fix the parity
                ghosts[0] = !ghosts[0];
            }
            let mut factors: Vec<(Variable, u32)> = Vec::new();
            for (slot, &e) in exps.iter().enumerate() {
                let v = if slot < dim {
                    Variable::Phi(slot)
                } else if slot < 2 * dim {
                    Variable::Lambda(slot - dim)
                } else {
                    Variable::Hbar
                };
                factors.push((v, e));
            }
            for (g, &on) in ghosts.iter().enumerate() {
                if on {
                    let v = if g < dim { Variable::C(g) } else { Variable::CBar(g - dim) };
                    factors.push((v, 1));
                }
            }
            acc = &acc + &GradedPolynomial::monomial(&ctx, c, &factors);
        }
        (acc, odd)
    })
}
