//! Canonical text form. `parse(format_canonical(f)) == f` for every `f`.

use super::poly::GradedPolynomial;
use crate::scalar::Scalar;

/// Deterministic, re-parseable rendering, e.g. `9*q^2*p^2 - 3/2*hbar^2`.
pub fn format_canonical(f: &GradedPolynomial) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    let ctx = f.ctx();
    let mut out = String::new();
    for (i, (m, c)) in f.terms().enumerate() {
        let factors: Vec<String> = f
            .monomial_factors(m)
            .into_iter()
            .map(|(v, e)| {
                if e == 1 {
                    ctx.name(v)
                } else {
                    format!("{}^{}", ctx.name(v), e)
                }
            })
            .collect();
        let negative = c.is_negative_lead();
        let shown: Scalar = if i > 0 && negative { -c } else { c.clone() };
        if i > 0 {
            out.push_str(if negative { " - " } else { " + " });
        }
        if factors.is_empty() {
            out.push_str(&shown.to_string());
            continue;
        }
        let mono = factors.join("*");
        if shown.is_one() {
            out.push_str(&mono);
        } else if (-&shown).is_one() {
            out.push('-');
            out.push_str(&mono);
        } else {
            out.push_str(&shown.to_string());
            out.push('*');
            out.push_str(&mono);
        }
    }
    out
}
