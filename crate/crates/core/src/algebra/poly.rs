use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::context::{Ctx, Variable};
use super::monomial::{bits_above, bits_below, Monomial};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Grading of a homogeneous element.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }
}

/// Exact polynomial over `φ, λ, ħ` (commuting) and `c, c̄` (anticommuting)
/// with Gaussian-rational coefficients.
///
/// Terms are kept in a `BTreeMap`, so iteration and printing are
/// deterministic; zero coefficients are never stored.
#[derive(Clone, Debug)]
pub struct GradedPolynomial {
    ctx: Ctx,
    terms: BTreeMap<Monomial, Scalar>,
}

fn same_ctx(a: &Ctx, b: &Ctx) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl PartialEq for GradedPolynomial {
    fn eq(&self, other: &Self) -> bool {
        same_ctx(&self.ctx, &other.ctx) && self.terms == other.terms
    }
}

impl Eq for GradedPolynomial {}

impl GradedPolynomial {
    pub fn zero(ctx: &Ctx) -> Self {
        GradedPolynomial {
            ctx: ctx.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ctx: &Ctx, c: Scalar) -> Self {
        let mut p = GradedPolynomial::zero(ctx);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(ctx.commuting_slots()), c);
        }
        p
    }

    pub fn one(ctx: &Ctx) -> Self {
        GradedPolynomial::constant(ctx, Scalar::one())
    }

    pub fn var(ctx: &Ctx, v: Variable) -> Self {
        let mut m = Monomial::one(ctx.commuting_slots());
        if v.is_odd() {
            m.ghosts = 1 << ctx.ghost_bit(v);
        } else {
            m.exps[ctx.slot(v)] = 1;
        }
        let mut p = GradedPolynomial::zero(ctx);
        p.terms.insert(m, Scalar::one());
        p
    }

    pub fn phi(ctx: &Ctx, a: usize) -> Self {
        GradedPolynomial::var(ctx, Variable::Phi(a))
    }

    pub fn lambda(ctx: &Ctx, a: usize) -> Self {
        GradedPolynomial::var(ctx, Variable::Lambda(a))
    }

    pub fn hbar(ctx: &Ctx) -> Self {
        GradedPolynomial::var(ctx, Variable::Hbar)
    }

    pub(crate) fn from_terms(ctx: &Ctx, terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Self {
        let mut p = GradedPolynomial::zero(ctx);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value if the polynomial is a constant (including zero).
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_ctx(&self, other: &Self) -> Result<()> {
        if same_ctx(&self.ctx, &other.ctx) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        let mut acc: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let Some((m, negative)) = ma.mul(mb) else {
                    continue;
                };
                let mut c = ca * cb;
                if negative {
                    c = -c;
                }
                match acc.entry(m) {
                    Entry::Vacant(e) => {
                        e.insert(c);
                    }
                    Entry::Occupied(mut e) => *e.get_mut() += &c,
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(GradedPolynomial {
            ctx: self.ctx.clone(),
            terms: acc,
        })
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        if s.is_zero() {
            return GradedPolynomial::zero(&self.ctx);
        }
        GradedPolynomial {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = GradedPolynomial::one(&self.ctx);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Parity if homogeneous; zero counts as even.
    pub fn parity(&self) -> Option<Parity> {
        let mut it = self.terms.keys().map(|m| m.is_odd());
        let Some(first) = it.next() else {
            return Some(Parity::Even);
        };
        if it.all(|o| o == first) {
            Some(if first { Parity::Odd } else { Parity::Even })
        } else {
            None
        }
    }

    /// Split into even and odd parts.
    pub fn split_parity(&self) -> (Self, Self) {
        let mut even = GradedPolynomial::zero(&self.ctx);
        let mut odd = GradedPolynomial::zero(&self.ctx);
        for (m, c) in &self.terms {
            let target = if m.is_odd() { &mut odd } else { &mut even };
            target.terms.insert(m.clone(), c.clone());
        }
        (even, odd)
    }

    pub fn contains_var(&self, v: Variable) -> bool {
        if v.is_odd() {
            let bit = 1u64 << self.ctx.ghost_bit(v);
            self.terms.keys().any(|m| m.ghosts & bit != 0)
        } else {
            let s = self.ctx.slot(v);
            self.terms.keys().any(|m| m.exps[s] > 0)
        }
    }

    pub fn has_ghosts(&self) -> bool {
        self.terms.keys().any(|m| m.ghosts != 0)
    }

    pub fn has_lambda(&self) -> bool {
        let dim = self.ctx.dim();
        self.terms
            .keys()
            .any(|m| m.exps[dim..2 * dim].iter().any(|&e| e > 0))
    }

    /// Every variable occurring, in context order.
    pub fn variables(&self) -> Vec<Variable> {
        self.ctx
            .all_variables()
            .into_iter()
            .filter(|&v| self.contains_var(v))
            .collect()
    }

    /// `Ok` iff only `φ` and `ħ` occur.
    pub fn require_phase_space(&self) -> Result<()> {
        match self
            .variables()
            .into_iter()
            .find(|v| !matches!(v, Variable::Phi(_) | Variable::Hbar))
        {
            Some(v) => Err(Error::NotPhaseSpace(self.ctx.name(v))),
            None => Ok(()),
        }
    }

    pub fn degree_in(&self, v: Variable) -> u32 {
        if v.is_odd() {
            return u32::from(self.contains_var(v));
        }
        let s = self.ctx.slot(v);
        self.terms.keys().map(|m| m.exps[s]).max().unwrap_or(0)
    }

    pub fn hbar_degree(&self) -> u32 {
        self.degree_in(Variable::Hbar)
    }

    /// Total degree in the `λ`'s (max over terms).
    pub fn lambda_degree(&self) -> u32 {
        let dim = self.ctx.dim();
        self.terms
            .keys()
            .map(|m| m.exps[dim..2 * dim].iter().sum())
            .max()
            .unwrap_or(0)
    }

    /// Total degree over all generators, `ħ` included.
    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.total_degree()).max().unwrap_or(0)
    }

    /// Partial derivative. Ghosts use the left derivative: the ghost is
    /// moved to the leftmost position, collecting a sign per transposition,
    /// then deleted.
    pub fn derivative(&self, v: Variable) -> Self {
        self.ghost_aware_derivative(v, true)
    }

    /// Right derivative: identical to [`derivative`](Self::derivative) for
    /// commuting variables; ghosts are moved to the rightmost position.
    pub fn right_derivative(&self, v: Variable) -> Self {
        self.ghost_aware_derivative(v, false)
    }

    fn ghost_aware_derivative(&self, v: Variable, left: bool) -> Self {
        let mut out = GradedPolynomial::zero(&self.ctx);
        if v.is_odd() {
            let bit = self.ctx.ghost_bit(v);
            let mask = 1u64 << bit;
            let passed = if left { bits_below(bit) } else { bits_above(bit) };
            for (m, c) in &self.terms {
                if m.ghosts & mask == 0 {
                    continue;
                }
                let mut dm = m.clone();
                dm.ghosts &= !mask;
                let c = if (m.ghosts & passed).count_ones() % 2 == 1 {
                    -c
                } else {
                    c.clone()
                };
                out.add_term(dm, c);
            }
        } else {
            let s = self.ctx.slot(v);
            for (m, c) in &self.terms {
                let e = m.exps[s];
                if e == 0 {
                    continue;
                }
                let mut dm = m.clone();
                dm.exps[s] -= 1;
                out.add_term(dm, c * &Scalar::from_int(i64::from(e)));
            }
        }
        out
    }

    /// Drop every term whose `ħ` exponent exceeds `order`.
    pub fn truncate_hbar(&self, order: u32) -> Self {
        GradedPolynomial {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.hbar_exponent() <= order)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Coefficient of `ħ^k` (a polynomial free of `ħ`).
    pub fn hbar_coefficient(&self, k: u32) -> Self {
        let slot = self.ctx.hbar_slot();
        GradedPolynomial {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.exps[slot] == k)
                .map(|(m, c)| {
                    let mut m = m.clone();
                    m.exps[slot] = 0;
                    (m, c.clone())
                })
                .collect(),
        }
    }

    /// Write `self = Σ_k v^k · P_k` for a commuting `v`; returns `[P_0, P_1, …]`.
    pub fn coefficients_in(&self, v: Variable) -> Vec<Self> {
        assert!(!v.is_odd(), "coefficients_in needs a commuting variable");
        let s = self.ctx.slot(v);
        let mut out = vec![GradedPolynomial::zero(&self.ctx); self.degree_in(v) as usize + 1];
        for (m, c) in &self.terms {
            let k = m.exps[s] as usize;
            let mut m = m.clone();
            m.exps[s] = 0;
            out[k].terms.insert(m, c.clone());
        }
        out
    }

    /// Substitute a commuting variable by an even polynomial.
    pub fn substitute(&self, v: Variable, value: &Self) -> Self {
        let parts = self.coefficients_in(v);
        let mut acc = GradedPolynomial::zero(&self.ctx);
        let mut power = GradedPolynomial::one(&self.ctx);
        for (k, part) in parts.iter().enumerate() {
            if k > 0 {
                power = &power * value;
            }
            if !part.is_zero() {
                acc = &acc + &(part * &power);
            }
        }
        acc
    }

    /// Drop all terms containing ghosts.
    pub fn bosonic_part(&self) -> Self {
        GradedPolynomial {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.ghosts == 0)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Terms free of any `λ`, and the remainder.
    pub fn split_lambda(&self) -> (Self, Self) {
        let dim = self.ctx.dim();
        let mut free = GradedPolynomial::zero(&self.ctx);
        let mut rest = GradedPolynomial::zero(&self.ctx);
        for (m, c) in &self.terms {
            let target = if m.exps[dim..2 * dim].iter().any(|&e| e > 0) {
                &mut rest
            } else {
                &mut free
            };
            target.terms.insert(m.clone(), c.clone());
        }
        (free, rest)
    }

    pub(crate) fn leading_term(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().max_by(|a, b| a.0.grlex_cmp(b.0))
    }

    /// Exact quotient `self / divisor` if `divisor` (ghost-free, nonzero)
    /// divides `self`; `None` otherwise.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        if divisor.is_zero() || divisor.has_ghosts() {
            return None;
        }
        let (lm, lc) = divisor.leading_term()?;
        let lc_inv = lc.inv()?;
        let (lm, divisor) = (lm.clone(), divisor.clone());
        let mut rem = self.clone();
        let mut quot = GradedPolynomial::zero(&self.ctx);
        while let Some((m, c)) = rem.leading_term() {
            let qm = m.div_commuting(&lm)?;
            let qc = c * &lc_inv;
            let t = GradedPolynomial::from_terms(&self.ctx, [(qm, qc)]);
            rem = &rem - &(&t * &divisor);
            quot = &quot + &t;
        }
        Some(quot)
    }

    /// Largest commuting monomial dividing every term (ghosts excluded).
    pub(crate) fn monomial_content(&self) -> Monomial {
        let slots = self.ctx.commuting_slots();
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Monomial::one(slots);
        };
        let mut exps = first.exps.clone();
        for m in it {
            for (e, x) in exps.iter_mut().zip(&m.exps) {
                *e = (*e).min(*x);
            }
        }
        Monomial { exps, ghosts: 0 }
    }

    pub(crate) fn div_monomial(&self, d: &Monomial) -> Self {
        GradedPolynomial {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.div_commuting(d).expect("divisible"), c.clone()))
                .collect(),
        }
    }

    /// Apply `f` to every coefficient.
    pub fn map_coefficients(&self, f: impl Fn(&Scalar) -> Scalar) -> Self {
        GradedPolynomial::from_terms(
            &self.ctx,
            self.terms.iter().map(|(m, c)| (m.clone(), f(c))),
        )
    }

    /// Build a single-term polynomial from variable powers.
    pub fn monomial(ctx: &Ctx, coeff: Scalar, factors: &[(Variable, u32)]) -> Self {
        let mut p = GradedPolynomial::constant(ctx, coeff);
        for &(v, e) in factors {
            p = &p * &GradedPolynomial::var(ctx, v).pow(e);
        }
        p
    }

    /// Variable factors of a monomial in print order, with exponents.
    pub(crate) fn monomial_factors(&self, m: &Monomial) -> Vec<(Variable, u32)> {
        let ctx = &self.ctx;
        let mut out = Vec::new();
        let h = m.hbar_exponent();
        if h > 0 {
            out.push((Variable::Hbar, h));
        }
        for slot in 0..ctx.hbar_slot() {
            if m.exps[slot] > 0 {
                out.push((ctx.slot_variable(slot), m.exps[slot]));
            }
        }
        let mut g = m.ghosts;
        while g != 0 {
            let bit = g.trailing_zeros();
            out.push((ctx.bit_variable(bit), 1));
            g &= g - 1;
        }
        out
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl<'a> $trait<&'a GradedPolynomial> for &'a GradedPolynomial {
            type Output = GradedPolynomial;
            /// Panics on context mismatch; use the `checked_*` form to recover.
            fn $method(self, rhs: &GradedPolynomial) -> GradedPolynomial {
                self.$checked(rhs).expect("polynomial context mismatch")
            }
        }

        impl $trait for GradedPolynomial {
            type Output = GradedPolynomial;
            fn $method(self, rhs: GradedPolynomial) -> GradedPolynomial {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &GradedPolynomial {
    type Output = GradedPolynomial;
    fn neg(self) -> GradedPolynomial {
        GradedPolynomial {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for GradedPolynomial {
    type Output = GradedPolynomial;
    fn neg(self) -> GradedPolynomial {
        -&self
    }
}

impl fmt::Display for GradedPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::format::format_canonical(self))
    }
}
