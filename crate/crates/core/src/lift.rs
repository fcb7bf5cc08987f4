//! Lifting phase-space Hamiltonians to the extended space.
//!
//! `H̃ = λ_a h^a + i c̄_a ∂_b h^a c^b` with `h^a = ω^{ab}∂_bH`, its ħ-series
//! `H̃ + Σ_j κ_j ħ^{2j} M_j`, and the representation `λ_a → −i∂/∂φ^a` used to
//! compare the series with the Moyal evolution operator.

use crate::algebra::{Ctx, GradedPolynomial, Variable};
use crate::brackets::moyal;
use crate::error::{Error, Result};
use crate::linalg::solve_scalar;
use crate::scalar::Scalar;

/// `h^a = ω^{ab}∂_bH` for `a = 0..2n`.
pub fn hamiltonian_vector_field(h: &GradedPolynomial) -> Result<Vec<GradedPolynomial>> {
    h.require_phase_space()?;
    let ctx = h.ctx();
    let grads: Vec<GradedPolynomial> = (0..ctx.dim()).map(|b| h.derivative(Variable::Phi(b))).collect();
    Ok((0..ctx.dim())
        .map(|a| {
            grads.iter().enumerate().fold(GradedPolynomial::zero(ctx), |acc, (b, g)| {
                let w = ctx.omega(a, b);
                if w.is_zero() {
                    acc
                } else {
                    &acc + &g.scale(w)
                }
            })
        })
        .collect())
}

/// `H̃ = λ_a h^a + i c̄_a ∂_b h^a c^b`; the ghost term is dropped when
/// `include_ghosts` is off.
pub fn lift_classical(h: &GradedPolynomial, include_ghosts: bool) -> Result<GradedPolynomial> {
    let ctx = h.ctx().clone();
    let field = hamiltonian_vector_field(h)?;
    let mut acc = GradedPolynomial::zero(&ctx);
    for (a, ha) in field.iter().enumerate() {
        acc = &acc + &(&GradedPolynomial::lambda(&ctx, a) * ha);
    }
    if include_ghosts {
        let mut ghost = GradedPolynomial::zero(&ctx);
        for (a, ha) in field.iter().enumerate() {
            let cbar = GradedPolynomial::var(&ctx, Variable::CBar(a));
            for b in 0..ctx.dim() {
                let dh = ha.derivative(Variable::Phi(b));
                if dh.is_zero() {
                    continue;
                }
                let c = GradedPolynomial::var(&ctx, Variable::C(b));
                ghost = &ghost + &(&(&cbar * &dh) * &c);
            }
        }
        acc = &acc + &ghost.scale(&Scalar::i());
    }
    Ok(acc)
}

/// `Λ^b = λ_a ω^{ab}`.
fn contracted_lambdas(ctx: &Ctx) -> Vec<GradedPolynomial> {
    (0..ctx.dim())
        .map(|b| {
            (0..ctx.dim()).fold(GradedPolynomial::zero(ctx), |acc, a| {
                let w = ctx.omega(a, b);
                if w.is_zero() {
                    acc
                } else {
                    &acc + &GradedPolynomial::lambda(ctx, a).scale(w)
                }
            })
        })
        .collect()
}

/// `M_j = [λ_aω^{ab}]⋯[λ_eω^{ef}] ∂_b⋯∂_f H` with `j + 2` contracted factors.
///
/// Computed as `D^{j+2} H` with `D = Λ^b ∂_b`; the `∂_b` never act on `λ`.
pub fn correction_term(h: &GradedPolynomial, j: u32) -> Result<GradedPolynomial> {
    h.require_phase_space()?;
    let ctx = h.ctx();
    let lambdas = contracted_lambdas(ctx);
    let mut acc = h.clone();
    for _ in 0..j + 2 {
        let mut next = GradedPolynomial::zero(ctx);
        for (b, lb) in lambdas.iter().enumerate() {
            let d = acc.derivative(Variable::Phi(b));
            if !d.is_zero() {
                next = &next + &(lb * &d);
            }
        }
        acc = next;
        if acc.is_zero() {
            break;
        }
    }
    Ok(acc)
}

/// The printed candidate coefficient `1/(2j+1)!`.
pub fn printed_coefficient(j: u32) -> Scalar {
    let fact: i64 = (2..=(2 * j as i64 + 1)).product();
    Scalar::frac(1, fact)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Correction {
    pub j: u32,
    pub coefficient: Scalar,
    pub term: GradedPolynomial,
}

/// `H̃ + Σ_j coefficient_j · ħ^{2j} · M_j` for `2j ≤ truncation_order`.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftSeries {
    pub base: GradedPolynomial,
    pub corrections: Vec<Correction>,
    pub truncation_order: u32,
}

impl LiftSeries {
    /// The whole series as one polynomial.
    pub fn to_polynomial(&self) -> GradedPolynomial {
        let ctx = self.base.ctx();
        let hbar = GradedPolynomial::hbar(ctx);
        self.corrections.iter().fold(self.base.clone(), |acc, c| {
            &acc + &(&c.term * &hbar.pow(2 * c.j)).scale(&c.coefficient)
        })
    }
}

/// Build the ħ-series to `order` (corrections for `2j ≤ order`). Without
/// explicit `coefficients` the printed `1/(2j+1)!` values are used;
/// `coefficients[j-1]` overrides the `j`-th one.
pub fn lift_moyal(
    h: &GradedPolynomial,
    order: u32,
    include_ghosts: bool,
    coefficients: Option<&[Scalar]>,
) -> Result<LiftSeries> {
    let base = lift_classical(h, include_ghosts)?;
    let mut corrections = Vec::new();
    for j in 1..=order / 2 {
        let coefficient = match coefficients.and_then(|c| c.get(j as usize - 1)) {
            Some(c) => c.clone(),
            None => printed_coefficient(j),
        };
        corrections.push(Correction {
            j,
            coefficient,
            term: correction_term(h, j)?,
        });
    }
    Ok(LiftSeries {
        base,
        corrections,
        truncation_order: order,
    })
}

/// Read each `λ_a` in `generator` as `−i∂/∂φ^a` acting on `rho`; all other
/// factors multiply. Ghost terms are dropped.
pub fn substitute_operator(generator: &GradedPolynomial, rho: &GradedPolynomial) -> Result<GradedPolynomial> {
    rho.require_phase_space()?;
    let ctx = generator.ctx();
    let dim = ctx.dim();
    let mut acc = GradedPolynomial::zero(ctx);
    for (m, c) in generator.bosonic_part().terms() {
        let mut derived = rho.clone();
        let mut order = 0i64;
        let mut factors: Vec<(Variable, u32)> = Vec::new();
        for (v, e) in generator.monomial_factors(m) {
            match v {
                Variable::Lambda(a) => {
                    for _ in 0..e {
                        derived = derived.derivative(Variable::Phi(a));
                    }
                    order += i64::from(e);
                }
                other => factors.push((other, e)),
            }
        }
        if derived.is_zero() {
            continue;
        }
        let coeff = c * &Scalar::i_pow(-order);
        let multiplier = GradedPolynomial::monomial(ctx, coeff, &factors);
        acc = &acc + &(&multiplier * &derived);
    }
    debug_assert!(dim > 0);
    Ok(acc)
}

/// Outcome for one unknown coefficient `κ_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct KappaEntry {
    pub j: u32,
    /// `None` when the equations leave `κ_j` free.
    pub value: Option<Scalar>,
    pub printed: Scalar,
    /// `κ_j / (1/(2j+1)!)` when `κ_j` is determined.
    pub ratio: Option<Scalar>,
    pub note: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatchVerdict {
    /// Every `κ_j` is uniquely determined and the equations are consistent.
    Unique,
    /// All correction terms vanish on the basis; any `κ` works.
    VacuouslyConsistent,
    /// Consistent, but some `κ_j` are not fixed by the basis.
    Underdetermined,
    /// No choice of `κ` reproduces the Moyal operator.
    Inconsistent,
}

impl MatchVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            MatchVerdict::Unique => "unique",
            MatchVerdict::VacuouslyConsistent => "vacuously consistent",
            MatchVerdict::Underdetermined => "underdetermined",
            MatchVerdict::Inconsistent => "inconsistent",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientReport {
    pub order: u32,
    pub basis_size: usize,
    pub equations: usize,
    pub rank: usize,
    pub verdict: MatchVerdict,
    pub kappas: Vec<KappaEntry>,
    /// With the solved `κ` (free ones set to the printed value), the
    /// substituted series equals the target on every basis element.
    pub verified_on_basis: bool,
}

/// Target of the matching: the Moyal generator `i·{H, ρ}_mb`, whose `ħ⁰`
/// part is the substituted `H̃` (the Liouville operator times `−i`).
pub fn moyal_target(h: &GradedPolynomial, rho: &GradedPolynomial, order: u32) -> Result<GradedPolynomial> {
    Ok(moyal(h, rho, Some(order))?.scale(&Scalar::i()))
}

/// Solve for `κ_j` such that `subst(H̃ + Σ κ_j ħ^{2j} M_j, ρ) = i·{H,ρ}_mb`
/// through `ħ^order` for every `ρ` in `basis`.
pub fn match_coefficients(
    h: &GradedPolynomial,
    order: u32,
    basis: &[GradedPolynomial],
) -> Result<CoefficientReport> {
    h.require_phase_space()?;
    if basis.is_empty() {
        return Err(Error::EmptyBasis);
    }
    let ctx = h.ctx();
    let unknowns = (order / 2) as usize;
    let base = lift_classical(h, false)?;
    let hbar = GradedPolynomial::hbar(ctx);
    let terms: Vec<GradedPolynomial> = (1..=unknowns as u32)
        .map(|j| Ok(&correction_term(h, j)? * &hbar.pow(2 * j)))
        .collect::<Result<_>>()?;

    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for rho in basis {
        let target = moyal_target(h, rho, order)?;
        let residual = &target - &substitute_operator(&base, rho)?;
        let columns: Vec<GradedPolynomial> = terms
            .iter()
            .map(|t| substitute_operator(t, rho))
            .collect::<Result<_>>()?;
        let mut monomials: Vec<_> = residual.terms().map(|(m, _)| m.clone()).collect();
        for col in &columns {
            monomials.extend(col.terms().map(|(m, _)| m.clone()));
        }
        monomials.sort();
        monomials.dedup();
        for m in monomials {
            let coeff_of = |p: &GradedPolynomial| {
                p.terms()
                    .find(|(k, _)| **k == m)
                    .map(|(_, c)| c.clone())
                    .unwrap_or_else(Scalar::zero)
            };
            let mut row: Vec<Scalar> = columns.iter().map(coeff_of).collect();
            row.push(coeff_of(&residual));
            rows.push(row);
        }
    }
    let equations = rows.len();
    let all_columns_zero = rows.iter().all(|r| r[..unknowns].iter().all(Scalar::is_zero));
    let solution = if rows.is_empty() {
        crate::linalg::ScalarSolution {
            rank: 0,
            consistent: true,
            values: vec![None; unknowns],
        }
    } else {
        solve_scalar(rows, unknowns)
    };
    let verdict = if !solution.consistent {
        MatchVerdict::Inconsistent
    } else if all_columns_zero {
        MatchVerdict::VacuouslyConsistent
    } else if solution.rank == unknowns {
        MatchVerdict::Unique
    } else {
        MatchVerdict::Underdetermined
    };

    let kappas: Vec<KappaEntry> = (1..=unknowns as u32)
        .map(|j| {
            let printed = printed_coefficient(j);
            let value = if solution.consistent {
                solution.values[j as usize - 1].clone()
            } else {
                None
            };
            let ratio = value.as_ref().map(|v| v / &printed);
            let note = describe_ratio(j, ratio.as_ref());
            KappaEntry {
                j,
                value,
                printed,
                ratio,
                note,
            }
        })
        .collect();

    let verified_on_basis = solution.consistent && {
        let chosen: Vec<Scalar> = kappas
            .iter()
            .map(|k| k.value.clone().unwrap_or_else(|| k.printed.clone()))
            .collect();
        let series = lift_moyal(h, order, false, Some(&chosen))?.to_polynomial();
        let mut ok = true;
        for rho in basis {
            let lhs = substitute_operator(&series, rho)?;
            if lhs != moyal_target(h, rho, order)? {
                ok = false;
                break;
            }
        }
        ok
    };

    Ok(CoefficientReport {
        order,
        basis_size: basis.len(),
        equations,
        rank: solution.rank,
        verdict,
        kappas,
        verified_on_basis,
    })
}

fn describe_ratio(j: u32, ratio: Option<&Scalar>) -> String {
    let Some(r) = ratio else {
        return "not determined by the test basis".to_string();
    };
    if r.is_one() {
        return "agrees with 1/(2j+1)!".to_string();
    }
    let sine = Scalar::frac(if j.is_multiple_of(2) { 1 } else { -1 }, 4i64.pow(j));
    if *r == sine {
        return format!(
            "equals (-1)^{j}*(1/2)^{} times 1/(2j+1)!: the sine-series sign and powers of 1/2 are absent from the printed coefficient",
            2 * j
        );
    }
    if *r == Scalar::frac(1, 4i64.pow(j)) {
        return format!("equals (1/2)^{} times 1/(2j+1)!", 2 * j);
    }
    if r.is_zero() {
        return "zero: the correction term does not contribute at this order".to_string();
    }
    format!("ratio {r} to 1/(2j+1)!")
}

/// All `φ`-monomials of total degree `≤ max_degree`, in print order.
pub fn monomial_basis(ctx: &Ctx, max_degree: u32) -> Vec<GradedPolynomial> {
    let dim = ctx.dim();
    let mut out = Vec::new();
    let mut exps = vec![0u32; dim];
    fn rec(
        ctx: &Ctx,
        slot: usize,
        remaining: u32,
        exps: &mut Vec<u32>,
        out: &mut Vec<GradedPolynomial>,
    ) {
        if slot == exps.len() {
            let factors: Vec<(Variable, u32)> = exps
                .iter()
                .enumerate()
                .map(|(a, &e)| (Variable::Phi(a), e))
                .collect();
            out.push(GradedPolynomial::monomial(ctx, Scalar::one(), &factors));
            return;
        }
        for e in 0..=remaining {
            exps[slot] = e;
            rec(ctx, slot + 1, remaining - e, exps, out);
        }
        exps[slot] = 0;
    }
    rec(ctx, 0, max_degree, &mut exps, &mut out);
    out.sort_by(|a, b| {
        let ka = a.terms().next().map(|(m, _)| m.clone());
        let kb = b.terms().next().map(|(m, _)| m.clone());
        ka.cmp(&kb)
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse, SymplecticContext};
    use crate::brackets::{epb, pb};
    use crate::test_support::arb_phase_poly;
    use proptest::prelude::*;

    fn ctx1() -> Ctx {
        SymplecticContext::standard(1).unwrap()
    }

    fn p(s: &str) -> GradedPolynomial {
        parse(s, &ctx1()).unwrap()
    }

    #[test]
    fn vector_fields() {
        assert_eq!(hamiltonian_vector_field(&p("1/2*(p^2+q^2)")).unwrap(), vec![p("p"), p("-q")]);
        assert_eq!(hamiltonian_vector_field(&p("1/2*p^2+1/4*q^4")).unwrap(), vec![p("p"), p("-q^3")]);
        assert_eq!(hamiltonian_vector_field(&p("7")).unwrap(), vec![p("0"), p("0")]);
        assert!(hamiltonian_vector_field(&p("l_q")).is_err());
    }

    #[test]
    fn classical_lift() {
        let ho = lift_classical(&p("1/2*(p^2+q^2)"), true).unwrap();
        // ∂_p h^q = 1, ∂_q h^p = -1
        assert_eq!(ho, p("l_q*p - l_p*q + i*cb0*c1 - i*cb1*c0"));
        let quartic = lift_classical(&p("1/2*p^2+1/4*q^4"), false).unwrap();
        assert_eq!(quartic, p("l_q*p - l_p*q^3"));
        assert!(lift_classical(&p("3"), true).unwrap().is_zero());
    }

    #[test]
    fn ghost_transport_of_forms() {
        let h = p("1/2*p^2 + 1/4*q^4 + q*p^2");
        let ht = lift_classical(&h, true).unwrap();
        let field = hamiltonian_vector_field(&h).unwrap();
        let ctx = ctx1();
        for a in 0..2 {
            let c = GradedPolynomial::var(&ctx, Variable::C(a));
            let expected = (0..2).fold(GradedPolynomial::zero(&ctx), |acc, b| {
                &acc + &(&field[a].derivative(Variable::Phi(b)) * &GradedPolynomial::var(&ctx, Variable::C(b)))
            });
            assert_eq!(epb(&c, &ht), expected);
            let cb = GradedPolynomial::var(&ctx, Variable::CBar(a));
            let expected = (0..2).fold(GradedPolynomial::zero(&ctx), |acc, b| {
                &acc - &(&GradedPolynomial::var(&ctx, Variable::CBar(b)) * &field[b].derivative(Variable::Phi(a)))
            });
            assert_eq!(epb(&cb, &ht), expected);
        }
    }

    #[test]
    fn correction_terms() {
        let ho = lift_moyal(&p("1/2*(p^2+q^2)"), 6, false, None).unwrap();
        assert!(ho.corrections.iter().all(|c| c.term.is_zero()));
        assert_eq!(ho.to_polynomial(), lift_classical(&p("1/2*(p^2+q^2)"), false).unwrap());
        let quartic = lift_moyal(&p("1/2*p^2+1/4*q^4"), 6, false, None).unwrap();
        // Λ^q = -l_p, ∂_q^3 H = 6q
        assert_eq!(quartic.corrections[0].term, p("-6*q*l_p^3"));
        assert_eq!(quartic.corrections[1].term, p("6*l_p^4"));
        assert!(quartic.corrections[2].term.is_zero());
        assert_eq!(quartic.corrections[0].coefficient, Scalar::frac(1, 6));
        assert_eq!(
            quartic.to_polynomial().truncate_hbar(2),
            &lift_classical(&p("1/2*p^2+1/4*q^4"), false).unwrap() + &p("-hbar^2*q*l_p^3")
        );
    }

    #[test]
    fn operator_substitution() {
        let ho = lift_classical(&p("1/2*(p^2+q^2)"), true).unwrap();
        let rho = p("q^3*p + 2*q*p^2");
        let liouville = &(&p("p") * &rho.derivative(Variable::Phi(0)))
            - &(&p("q") * &rho.derivative(Variable::Phi(1)));
        assert_eq!(substitute_operator(&ho, &rho).unwrap(), liouville.scale(&-Scalar::i()));
        assert_eq!(substitute_operator(&p("l_q"), &p("q^2")).unwrap(), p("-2*i*q"));
        let series = lift_moyal(&p("1/2*p^2+1/4*q^4"), 2, false, None).unwrap().to_polynomial();
        let out = substitute_operator(&series, &p("q^2*p")).unwrap();
        // ∂_p^3 (q^2 p) = 0, so only the Liouville part survives
        assert_eq!(out, p("-i*(2*q*p^2 - q^5)"));
        let out = substitute_operator(&series, &p("p^3")).unwrap();
        // -i(-3q^3 p^2) + (1/6) hbar^2 (-6q)(i)(6) = 3i q^3 p^2 - 6i hbar^2 q
        assert_eq!(out, p("3*i*q^3*p^2 - 6*i*hbar^2*q"));
    }

    #[test]
    fn matching_quartic_gives_one_over_twenty_four() {
        let ctx = ctx1();
        let basis = monomial_basis(&ctx, 5);
        let report = match_coefficients(&p("1/2*p^2+1/4*q^4"), 2, &basis).unwrap();
        assert_eq!(report.verdict, MatchVerdict::Unique);
        assert_eq!(report.kappas[0].value, Some(Scalar::frac(1, 24)));
        assert_eq!(report.kappas[0].ratio, Some(Scalar::frac(1, 4)));
        assert!(report.verified_on_basis);
        let other = match_coefficients(&p("q^3*p"), 2, &basis).unwrap();
        assert_eq!(other.kappas[0].value, Some(Scalar::frac(1, 24)));
    }

    #[test]
    fn matching_harmonic_is_vacuous() {
        let basis = monomial_basis(&ctx1(), 4);
        let report = match_coefficients(&p("1/2*(p^2+q^2)"), 4, &basis).unwrap();
        assert_eq!(report.verdict, MatchVerdict::VacuouslyConsistent);
        assert!(report.verified_on_basis);
    }

    #[test]
    fn basis_enumeration() {
        let b = monomial_basis(&ctx1(), 2);
        let names: Vec<String> = b.iter().map(|x| x.to_string()).collect();
        assert_eq!(names, vec!["q^2", "q*p", "p^2", "q", "p", "1"]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn lift_reproduces_poisson_flow(h in arb_phase_poly(1, 4)) {
            let ctx = h.ctx().clone();
            let ht = lift_classical(&h, true).unwrap();
            for a in 0..2 {
                let phi = GradedPolynomial::phi(&ctx, a);
                prop_assert_eq!(epb(&phi, &ht), pb(&phi, &h).unwrap());
            }
        }

        #[test]
        fn substitution_sign_convention(h in arb_phase_poly(1, 3), rho in arb_phase_poly(1, 3)) {
            let ht = lift_classical(&h, false).unwrap();
            let sum = &substitute_operator(&ht, &rho).unwrap() + &pb(&rho, &h).unwrap().scale(&Scalar::i());
            prop_assert!(sum.is_zero());
        }

        #[test]
        fn quadratic_series_is_classical(h in arb_phase_poly(1, 2)) {
            let series = lift_moyal(&h, 6, true, None).unwrap();
            prop_assert_eq!(series.to_polynomial(), lift_classical(&h, true).unwrap());
        }
    }
}
