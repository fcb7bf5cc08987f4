//! Poisson, extended Poisson and Moyal brackets.
//!
//! The extended bracket is generated by `{φ^a, λ_b} = δ^a_b` and
//! `{c^a, c̄_b} = -iδ^a_b`:
//!
//! ```text
//! {F,G} = F←∂_{φ^a} →∂_{λ_a}G − F←∂_{λ_a} →∂_{φ^a}G
//!         − i (F←∂_{c^a} →∂_{c̄_a}G + F←∂_{c̄_a} →∂_{c^a}G)
//! ```
//!
//! With right derivatives on the left argument and left derivatives on the
//! right one, the ghost sector transports forms: `{c^a, H̃} = ∂_b h^a c^b`
//! and `{c̄_a, H̃} = −c̄_b ∂_a h^b`.
//!
//! The Moyal bracket is not a derivation: only its `ħ⁰` part (the Poisson
//! bracket) obeys the Leibniz rule, which is why a Dirac bracket can never
//! reproduce it for all observables.

use std::fmt;

use crate::algebra::{GradedPolynomial, Variable};
use crate::error::Result;
use crate::scalar::Scalar;

/// Which bracket to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BracketKind {
    Pb,
    Epb,
    /// Moyal bracket truncated at `ħ^{2⌊order/2⌋}`; `None` keeps every
    /// (finitely many) term.
    Moyal { order: Option<u32> },
}

impl fmt::Display for BracketKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BracketKind::Pb => write!(f, "pb"),
            BracketKind::Epb => write!(f, "epb"),
            BracketKind::Moyal { order: None } => write!(f, "moyal"),
            BracketKind::Moyal { order: Some(k) } => write!(f, "moyal(order={k})"),
        }
    }
}

/// Evaluate any bracket kind; `pb`/`moyal` reject non-phase-space inputs.
pub fn bracket(kind: BracketKind, f: &GradedPolynomial, g: &GradedPolynomial) -> Result<GradedPolynomial> {
    match kind {
        BracketKind::Pb => pb(f, g),
        BracketKind::Epb => Ok(epb(f, g)),
        BracketKind::Moyal { order } => moyal(f, g, order),
    }
}

/// Classical Poisson bracket `∂_aF ω^{ab} ∂_bG` on phase space.
pub fn pb(f: &GradedPolynomial, g: &GradedPolynomial) -> Result<GradedPolynomial> {
    f.require_phase_space()?;
    g.require_phase_space()?;
    Ok(pb_permissive(f, g))
}

/// Poisson bracket treating every non-`φ` generator as a parameter.
pub fn pb_permissive(f: &GradedPolynomial, g: &GradedPolynomial) -> GradedPolynomial {
    bidifferential_power_permissive(f, g, 1)
}

/// Extended Poisson bracket on the full graded space.
pub fn epb(f: &GradedPolynomial, g: &GradedPolynomial) -> GradedPolynomial {
    let ctx = f.ctx();
    let mut acc = GradedPolynomial::zero(ctx);
    for a in 0..ctx.dim() {
        let (phi, lam) = (Variable::Phi(a), Variable::Lambda(a));
        let f_phi = f.derivative(phi);
        if !f_phi.is_zero() {
            acc = &acc + &(&f_phi * &g.derivative(lam));
        }
        let f_lam = f.derivative(lam);
        if !f_lam.is_zero() {
            acc = &acc - &(&f_lam * &g.derivative(phi));
        }
    }
    if f.has_ghosts() && g.has_ghosts() {
        let mut ghost = GradedPolynomial::zero(ctx);
        for a in 0..ctx.dim() {
            let (c, cb) = (Variable::C(a), Variable::CBar(a));
            let f_c = f.right_derivative(c);
            if !f_c.is_zero() {
                ghost = &ghost + &(&f_c * &g.derivative(cb));
            }
            let f_cb = f.right_derivative(cb);
            if !f_cb.is_zero() {
                ghost = &ghost + &(&f_cb * &g.derivative(c));
            }
        }
        acc = &acc - &ghost.scale(&Scalar::i());
    }
    acc
}

/// `P^k(F,G) = Σ ∂_{a1…ak}F ω^{a1b1}⋯ω^{akbk} ∂_{b1…bk}G`, with `P^0 = FG`.
pub fn bidifferential_power(f: &GradedPolynomial, g: &GradedPolynomial, k: u32) -> Result<GradedPolynomial> {
    f.require_phase_space()?;
    g.require_phase_space()?;
    Ok(bidifferential_power_permissive(f, g, k))
}

fn bidifferential_power_permissive(f: &GradedPolynomial, g: &GradedPolynomial, k: u32) -> GradedPolynomial {
    if k == 0 {
        return f * g;
    }
    let ctx = f.ctx();
    let dim = ctx.dim();
    let mut acc = GradedPolynomial::zero(ctx);
    if f.is_zero() || g.is_zero() {
        return acc;
    }
    let df: Vec<GradedPolynomial> = (0..dim).map(|a| f.derivative(Variable::Phi(a))).collect();
    let dg: Vec<GradedPolynomial> = (0..dim).map(|b| g.derivative(Variable::Phi(b))).collect();
    for (a, fa) in df.iter().enumerate() {
        if fa.is_zero() {
            continue;
        }
        for (b, gb) in dg.iter().enumerate() {
            let w = ctx.omega(a, b);
            if w.is_zero() || gb.is_zero() {
                continue;
            }
            acc = &acc + &bidifferential_power_permissive(fa, gb, k - 1).scale(w);
        }
    }
    acc
}

fn phi_degree(f: &GradedPolynomial) -> u32 {
    let dim = f.ctx().dim();
    f.terms()
        .map(|(m, _)| m.exps[..dim].iter().sum::<u32>())
        .max()
        .unwrap_or(0)
}

/// Moyal bracket `Σ_j (−1)^j (ħ²/4)^j/(2j+1)! · P^{2j+1}(F,G)`.
///
/// The series terminates once `2j+1` exceeds the smaller `φ`-degree; the
/// result is then truncated at `ħ^{2⌊order/2⌋}` when an order is given.
pub fn moyal(f: &GradedPolynomial, g: &GradedPolynomial, order: Option<u32>) -> Result<GradedPolynomial> {
    f.require_phase_space()?;
    g.require_phase_space()?;
    Ok(moyal_permissive(f, g, order))
}

pub fn moyal_permissive(f: &GradedPolynomial, g: &GradedPolynomial, order: Option<u32>) -> GradedPolynomial {
    let ctx = f.ctx();
    let max_k = phi_degree(f).min(phi_degree(g));
    let hbar2 = GradedPolynomial::hbar(ctx).pow(2);
    let mut acc = GradedPolynomial::zero(ctx);
    let mut j: u32 = 0;
    while 2 * j < max_k {
        if let Some(ord) = order {
            if 2 * j > ord {
                break;
            }
        }
        let coeff = moyal_coefficient(j);
        let term = bidifferential_power_permissive(f, g, 2 * j + 1);
        acc = &acc + &(&term * &hbar2.pow(j)).scale(&coeff);
        j += 1;
    }
    match order {
        Some(ord) => acc.truncate_hbar(2 * (ord / 2)),
        None => acc,
    }
}

/// `(−1)^j / (4^j (2j+1)!)`, the coefficient of `ħ^{2j} P^{2j+1}`.
pub fn moyal_coefficient(j: u32) -> Scalar {
    let mut fact: i64 = 1;
    for k in 2..=(2 * j as i64 + 1) {
        fact *= k;
    }
    let denom = 4i64.pow(j) * fact;
    let sign = if j.is_multiple_of(2) { 1 } else { -1 };
    Scalar::frac(sign, denom)
}
