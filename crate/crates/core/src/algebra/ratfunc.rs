use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::context::{Ctx, Variable};
use super::poly::{GradedPolynomial, Parity};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Quotient `num / den` with a ghost-free denominator.
///
/// Equality is decided by cross-multiplication. Construction cancels the
/// common monomial factor, normalises the denominator's leading coefficient
/// to 1 and collapses to a polynomial whenever the denominator divides the
/// numerator exactly. No polynomial GCD is taken.
#[derive(Clone, Debug)]
pub struct RationalFunction {
    num: GradedPolynomial,
    den: GradedPolynomial,
}

impl RationalFunction {
    pub fn from_poly(p: GradedPolynomial) -> Self {
        let den = GradedPolynomial::one(p.ctx());
        RationalFunction { num: p, den }
    }

    pub fn zero(ctx: &Ctx) -> Self {
        RationalFunction::from_poly(GradedPolynomial::zero(ctx))
    }

    /// Build `num / den`. A denominator with ghosts must be even with a
    /// nonzero ghost-free body; it is inverted through the terminating
    /// nilpotent series.
    pub fn new(num: GradedPolynomial, den: GradedPolynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.ctx() != den.ctx() && **num.ctx() != **den.ctx() {
            return Err(Error::ContextMismatch);
        }
        let (num, den) = if den.has_ghosts() {
            invert_with_nilpotent(num, den)?
        } else {
            (num, den)
        };
        Ok(RationalFunction { num, den }.normalized())
    }

    fn normalized(self) -> Self {
        let RationalFunction { mut num, mut den } = self;
        let ctx = num.ctx().clone();
        if num.is_zero() {
            return RationalFunction::zero(&ctx);
        }
        if let Some(c) = den.as_constant() {
            let inv = c.inv().expect("nonzero denominator");
            return RationalFunction::from_poly(num.scale(&inv));
        }
        if let Some(q) = num.exact_div(&den) {
            return RationalFunction::from_poly(q);
        }
        let content = {
            let a = num.monomial_content();
            let b = den.monomial_content();
            let mut m = a.clone();
            for (e, x) in m.exps.iter_mut().zip(&b.exps) {
                *e = (*e).min(*x);
            }
            m
        };
        if !content.is_one() {
            num = num.div_monomial(&content);
            den = den.div_monomial(&content);
        }
        let lc = den.leading_term().map(|(_, c)| c.clone()).expect("nonzero");
        if !lc.is_one() {
            let inv = lc.inv().expect("nonzero");
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        RationalFunction { num, den }
    }

    pub fn num(&self) -> &GradedPolynomial {
        &self.num
    }

    pub fn den(&self) -> &GradedPolynomial {
        &self.den
    }

    pub fn ctx(&self) -> &Ctx {
        self.num.ctx()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.as_constant().is_some()
    }

    /// The polynomial value, if the denominator has been cancelled.
    pub fn as_polynomial(&self) -> Option<&GradedPolynomial> {
        self.is_polynomial().then_some(&self.num)
    }

    pub fn into_polynomial(self) -> std::result::Result<GradedPolynomial, Self> {
        if self.is_polynomial() {
            Ok(self.num)
        } else {
            Err(self)
        }
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        RationalFunction {
            num: self.num.scale(s),
            den: self.den.clone(),
        }
        .normalized()
    }

    pub fn inv(&self) -> Result<Self> {
        RationalFunction::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RationalFunction::new(&self.num * &other.den, &self.den * &other.num)
    }

    /// Left derivative (the denominator is even and ghost-free, so the
    /// quotient rule applies unchanged).
    pub fn derivative(&self, v: Variable) -> Self {
        if self.is_polynomial() {
            return RationalFunction::from_poly(self.num.derivative(v));
        }
        if v.is_odd() {
            return RationalFunction {
                num: self.num.derivative(v),
                den: self.den.clone(),
            }
            .normalized();
        }
        let num = &(&self.num.derivative(v) * &self.den) - &(&self.num * &self.den.derivative(v));
        RationalFunction {
            num,
            den: &self.den * &self.den,
        }
        .normalized()
    }

    pub fn truncate_hbar(&self, order: u32) -> Self {
        assert!(
            self.is_polynomial(),
            "truncation of a proper rational function is not a finite operation"
        );
        RationalFunction::from_poly(self.num.truncate_hbar(order))
    }
}

/// `num / (d0 + N)` with `N` nilpotent: `Σ_k (-N)^k d0^{m-k} / d0^{m+1}`.
fn invert_with_nilpotent(
    num: GradedPolynomial,
    den: GradedPolynomial,
) -> Result<(GradedPolynomial, GradedPolynomial)> {
    if den.parity() != Some(Parity::Even) {
        return Err(Error::BadDenominator);
    }
    let body = den.bosonic_part();
    if body.is_zero() {
        return Err(Error::BadDenominator);
    }
    let nil = &den - &body;
    let mut powers = vec![GradedPolynomial::one(den.ctx())];
    loop {
        let next = &powers[powers.len() - 1] * &(-&nil);
        if next.is_zero() {
            break;
        }
        powers.push(next);
    }
    let m = powers.len() - 1;
    let mut series = GradedPolynomial::zero(den.ctx());
    for (k, pk) in powers.iter().enumerate() {
        series = &series + &(pk * &body.pow((m - k) as u32));
    }
    Ok((&num * &series, body.pow(m as u32 + 1)))
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl From<GradedPolynomial> for RationalFunction {
    fn from(p: GradedPolynomial) -> Self {
        RationalFunction::from_poly(p)
    }
}

impl<'a> Add<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.den == rhs.den {
            return RationalFunction {
                num: &self.num + &rhs.num,
                den: self.den.clone(),
            }
            .normalized();
        }
        RationalFunction {
            num: &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            den: &self.den * &rhs.den,
        }
        .normalized()
    }
}

impl<'a> Sub<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction {
            num: &self.num * &rhs.num,
            den: &self.den * &rhs.den,
        }
        .normalized()
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::context::SymplecticContext;
    use crate::algebra::parse::parse;

    #[test]
    fn collapses_exact_quotients() {
        let ctx = SymplecticContext::standard(1).unwrap();
        let num = parse("q^2 - p^2", &ctx).unwrap();
        let den = parse("q + p", &ctx).unwrap();
        let r = RationalFunction::new(num, den).unwrap();
        assert_eq!(r.as_polynomial().unwrap().to_string(), "q - p");
    }

    #[test]
    fn cross_multiplication_equality() {
        let ctx = SymplecticContext::standard(1).unwrap();
        let a = RationalFunction::new(parse("2*q", &ctx).unwrap(), parse("4*q*p + 2", &ctx).unwrap())
            .unwrap();
        let b = RationalFunction::new(parse("q", &ctx).unwrap(), parse("2*q*p + 1", &ctx).unwrap())
            .unwrap();
        assert_eq!(a, b);
        let sum = &a + &(-&b);
        assert!(sum.is_zero());
        assert!(RationalFunction::new(parse("q", &ctx).unwrap(), GradedPolynomial::zero(&ctx)).is_err());
    }

    #[test]
    fn nilpotent_denominator_inverse() {
        let ctx = SymplecticContext::standard(1).unwrap();
        let den = parse("q + c0*cb1", &ctx).unwrap();
        let r = RationalFunction::new(GradedPolynomial::one(&ctx), den.clone()).unwrap();
        assert!(!r.den().has_ghosts());
        let back = &r * &RationalFunction::from_poly(den);
        assert_eq!(back.as_polynomial().unwrap().to_string(), "1");
        let odd = parse("c0", &ctx).unwrap();
        assert!(RationalFunction::new(GradedPolynomial::one(&ctx), odd).is_err());
    }

    #[test]
    fn quotient_rule() {
        let ctx = SymplecticContext::standard(1).unwrap();
        let r = RationalFunction::new(GradedPolynomial::one(&ctx), parse("q", &ctx).unwrap()).unwrap();
        let d = r.derivative(Variable::Phi(0));
        let expected =
            RationalFunction::new(parse("-1", &ctx).unwrap(), parse("q^2", &ctx).unwrap()).unwrap();
        assert_eq!(d, expected);
    }
}
