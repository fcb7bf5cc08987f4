//! Dirac's constraint algorithm for the ħ-dependent constraints
//! `Φ^a_(0) = θ(a−n)(φ^a + ħω^{ab}λ_b)` on the extended phase space.
//!
//! The pipeline is [`consistency_iteration`] (secondary constraints and the
//! multiplier equations), the constraint matrix `C_{αβ} = {Ψ_α,Ψ_β}_epb`,
//! its adjugate inverse, the Dirac bracket and finally the comparison of
//! `{F, H̃_T}_edb` against the Moyal evolution of `F`.

mod surface;

pub use surface::ConstraintSurface;

use std::fmt;

use rayon::prelude::*;

use crate::algebra::{Ctx, GradedPolynomial, RationalFunction, Variable};
use crate::brackets::{epb, moyal};
use crate::error::{Error, Result};
use crate::lift::lift_classical;
use crate::linalg::{adjugate, determinant, eliminate, Elimination, PolyMatrix};
use crate::scalar::Scalar;

/// How `ħ` enters the constraints.
#[derive(Clone, Debug, PartialEq, Default)]
pub enum HbarMode {
    #[default]
    Symbolic,
    Numeric(Scalar),
}

impl HbarMode {
    pub fn as_polynomial(&self, ctx: &Ctx) -> GradedPolynomial {
        match self {
            HbarMode::Symbolic => GradedPolynomial::hbar(ctx),
            HbarMode::Numeric(v) => GradedPolynomial::constant(ctx, v.clone()),
        }
    }

    /// Substitute the numeric value, if any.
    pub fn apply(&self, p: &GradedPolynomial) -> GradedPolynomial {
        match self {
            HbarMode::Symbolic => p.clone(),
            HbarMode::Numeric(v) => {
                p.substitute(Variable::Hbar, &GradedPolynomial::constant(p.ctx(), v.clone()))
            }
        }
    }
}

impl fmt::Display for HbarMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HbarMode::Symbolic => write!(f, "symbolic"),
            HbarMode::Numeric(v) => write!(f, "{v}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstraintClass {
    SecondClass,
    FirstClass,
    Undetermined,
}

impl ConstraintClass {
    pub fn as_str(self) -> &'static str {
        match self {
            ConstraintClass::SecondClass => "second_class",
            ConstraintClass::FirstClass => "first_class",
            ConstraintClass::Undetermined => "undetermined",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub expr: GradedPolynomial,
    pub stage: usize,
    /// Index `a` of the primary constraint this one descends from.
    pub index: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConstraintSet {
    pub constraints: Vec<Constraint>,
    pub classification: Vec<ConstraintClass>,
}

impl ConstraintSet {
    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    pub fn exprs(&self) -> Vec<GradedPolynomial> {
        self.constraints.iter().map(|c| c.expr.clone()).collect()
    }

    pub fn stage(&self, k: usize) -> impl Iterator<Item = &Constraint> {
        self.constraints.iter().filter(move |c| c.stage == k)
    }

    fn push(&mut self, expr: GradedPolynomial, stage: usize, index: usize) {
        self.constraints.push(Constraint { expr, stage, index });
        self.classification.push(ConstraintClass::Undetermined);
    }
}

/// `Φ^a_(0) = φ^a + ħω^{ab}λ_b` for `a ∈ [n, 2n)`.
pub fn primary_constraints(ctx: &Ctx, hbar: &HbarMode) -> ConstraintSet {
    let h = hbar.as_polynomial(ctx);
    let mut set = ConstraintSet {
        constraints: Vec::new(),
        classification: Vec::new(),
    };
    for a in ctx.n()..ctx.dim() {
        let mut expr = GradedPolynomial::phi(ctx, a);
        for b in 0..ctx.dim() {
            let w = ctx.omega(a, b);
            if !w.is_zero() {
                expr = &expr + &(&h * &GradedPolynomial::lambda(ctx, b)).scale(w);
            }
        }
        set.push(expr, 0, a);
    }
    set
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiracOptions {
    pub include_ghosts: bool,
    pub max_stages: usize,
    pub hbar: HbarMode,
    /// Coefficients `ξ_a` folded into the Hamiltonian as `H̃ + ξ_aΦ^a_(0)`
    /// before the iteration starts.
    pub xi: Option<Vec<GradedPolynomial>>,
    /// Replace the primary constraints by user-supplied ones.
    pub primary_override: Option<Vec<GradedPolynomial>>,
}

impl Default for DiracOptions {
    fn default() -> Self {
        DiracOptions {
            include_ghosts: false,
            max_stages: 8,
            hbar: HbarMode::Symbolic,
            xi: None,
            primary_override: None,
        }
    }
}

/// Fate of one consistency condition `{Ψ, H̃_T}_epb ≈ 0`.
#[derive(Clone, Debug, PartialEq)]
pub enum TraceOutcome {
    /// Became constraint number `usize`.
    NewConstraint(usize),
    /// Has a nonzero coefficient on some `u_a`.
    MultiplierEquation,
    /// Vanishes on the current constraint surface.
    WeaklyZero,
    /// Proportional to a constraint already recorded.
    Duplicate,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceStep {
    pub stage: usize,
    /// Constraint whose evolution was computed; `None` for consequences of
    /// the multiplier equations.
    pub source: Option<usize>,
    pub expr: GradedPolynomial,
    pub outcome: TraceOutcome,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Multiplier {
    /// Fixed by the consistency conditions.
    Determined(RationalFunction),
    /// Fixed after setting the free multipliers to zero.
    Gauge(RationalFunction),
    Free,
}

impl Multiplier {
    pub fn value(&self) -> Option<&RationalFunction> {
        match self {
            Multiplier::Determined(r) | Multiplier::Gauge(r) => Some(r),
            Multiplier::Free => None,
        }
    }
}

/// Immutable result of the constraint algorithm.
#[derive(Clone, Debug)]
pub struct ConstraintAnalysis {
    pub ctx: Ctx,
    pub options: DiracOptions,
    /// Input phase-space Hamiltonian.
    pub hamiltonian: GradedPolynomial,
    /// `H̃`, plus `ξ_aΦ^a_(0)` when requested.
    pub extended: GradedPolynomial,
    pub psi: ConstraintSet,
    pub c: PolyMatrix,
    /// Constraints used as the second-class set in the Dirac bracket.
    pub second_class: Vec<usize>,
    /// `det` of the second-class block of `C`.
    pub det: GradedPolynomial,
    /// Adjugate of the second-class block.
    pub adj: PolyMatrix,
    /// Full `C⁻¹` when `C` is nonsingular.
    pub c_inv: Option<Vec<Vec<RationalFunction>>>,
    /// `u_a`, one per primary constraint.
    pub multipliers: Vec<Multiplier>,
    pub total_hamiltonian: RationalFunction,
    pub surface: ConstraintSurface,
    pub trace: Vec<TraceStep>,
}

impl ConstraintAnalysis {
    pub fn primaries(&self) -> Vec<&GradedPolynomial> {
        self.psi.stage(0).map(|c| &c.expr).collect()
    }

    pub fn stages(&self) -> usize {
        self.psi.constraints.iter().map(|c| c.stage).max().unwrap_or(0)
    }

    /// Ghost-bearing part of each constraint.
    pub fn ghost_terms(&self) -> Vec<GradedPolynomial> {
        self.psi
            .constraints
            .iter()
            .map(|c| &c.expr - &c.expr.bosonic_part())
            .collect()
    }
}

fn proportional(a: &GradedPolynomial, b: &GradedPolynomial) -> bool {
    let (Some((ma, ca)), Some((mb, cb))) = (a.leading_term(), b.leading_term()) else {
        return false;
    };
    if ma != mb || a.len() != b.len() {
        return false;
    }
    let ratio = cb / ca;
    &a.scale(&ratio) == b
}

/// Constraints and multiplier equations produced by the stage loop, before
/// classification.
#[derive(Clone, Debug)]
pub struct Iteration {
    pub extended: GradedPolynomial,
    pub psi: ConstraintSet,
    pub trace: Vec<TraceStep>,
    /// `false` when `max_stages` was reached with new constraints pending.
    pub terminated: bool,
    /// First constraint of the last stage when the loop did not terminate.
    pub unresolved: Option<GradedPolynomial>,
    elimination: Option<Elimination>,
    primaries: Vec<GradedPolynomial>,
}

/// The stage loop alone: `Φ_(k+1)` candidates from `{Ψ, H̃_T}_epb`, sorted
/// into multiplier equations and new constraints.
pub fn iterate(h: &GradedPolynomial, options: &DiracOptions) -> Result<Iteration> {
    h.require_phase_space()?;
    let ctx = h.ctx().clone();
    let mut psi = match &options.primary_override {
        Some(list) => {
            let mut set = ConstraintSet {
                constraints: Vec::new(),
                classification: Vec::new(),
            };
            for (k, p) in list.iter().enumerate() {
                if p.ctx() != &ctx && **p.ctx() != *ctx {
                    return Err(Error::ContextMismatch);
                }
                set.push(options.hbar.apply(p), 0, ctx.n() + k);
            }
            set
        }
        None => primary_constraints(&ctx, &options.hbar),
    };
    let primaries = psi.exprs();
    let mut extended = lift_classical(h, options.include_ghosts)?;
    if let Some(xi) = &options.xi {
        for (x, phi) in xi.iter().zip(&primaries) {
            extended = &extended + &(x * phi);
        }
    }

    let mut trace = Vec::new();
    let mut equations: PolyMatrix = Vec::new();
    let mut elimination: Option<Elimination> = None;
    let mut frontier: Vec<usize> = (0..psi.len()).collect();
    let mut stage = 0;
    loop {
        let mut fresh = Vec::new();
        for &idx in &frontier {
            let source = psi.constraints[idx].clone();
            let constant = epb(&source.expr, &extended);
            let coeffs: Vec<GradedPolynomial> =
                primaries.iter().map(|p| epb(&source.expr, p)).collect();
            if coeffs.iter().any(|c| !c.is_zero()) {
                let mut row = coeffs;
                row.push(-&constant);
                equations.push(row);
                trace.push(TraceStep {
                    stage,
                    source: Some(idx),
                    expr: constant,
                    outcome: TraceOutcome::MultiplierEquation,
                });
                continue;
            }
            let outcome = record_candidate(&ctx, &mut psi, constant.clone(), stage + 1, source.index)?;
            if let TraceOutcome::NewConstraint(k) = outcome {
                fresh.push(k);
            }
            trace.push(TraceStep {
                stage,
                source: Some(idx),
                expr: constant,
                outcome,
            });
        }
        if !equations.is_empty() {
            let elim = eliminate(&ctx, equations.clone(), primaries.len());
            for consequence in elim.consequences() {
                let outcome = record_candidate(&ctx, &mut psi, consequence.clone(), stage + 1, usize::MAX)?;
                if let TraceOutcome::NewConstraint(k) = outcome {
                    fresh.push(k);
                }
                trace.push(TraceStep {
                    stage,
                    source: None,
                    expr: consequence,
                    outcome,
                });
            }
            elimination = Some(elim);
        }
        if fresh.is_empty() {
            break;
        }
        stage += 1;
        if stage >= options.max_stages {
            let unresolved = Some(psi.constraints[fresh[0]].expr.clone());
            return Ok(Iteration {
                extended,
                psi,
                trace,
                terminated: false,
                unresolved,
                elimination,
                primaries,
            });
        }
        frontier = fresh;
    }
    Ok(Iteration {
        extended,
        psi,
        trace,
        terminated: true,
        unresolved: None,
        elimination,
        primaries,
    })
}

/// Run the constraint algorithm for the phase-space Hamiltonian `h`.
pub fn consistency_iteration(h: &GradedPolynomial, options: &DiracOptions) -> Result<ConstraintAnalysis> {
    let Iteration {
        extended,
        mut psi,
        trace,
        terminated,
        unresolved,
        elimination,
        primaries,
    } = iterate(h, options)?;
    if !terminated {
        return Err(Error::MaxStagesExceeded {
            stages: options.max_stages,
            expr: unresolved.map(|u| u.to_string()).unwrap_or_default(),
        });
    }
    let ctx = h.ctx().clone();

    let multipliers = solve_multipliers(&ctx, elimination.as_ref(), primaries.len())?;
    let mut total = RationalFunction::from_poly(extended.clone());
    for (u, phi) in multipliers.iter().zip(&primaries) {
        if let Some(u) = u.value() {
            total = &total + &(u * &RationalFunction::from_poly(phi.clone()));
        }
    }

    let exprs = psi.exprs();
    let surface = ConstraintSurface::new(&ctx, &exprs);
    let c = constraint_matrix(&psi);
    let second_class = second_class_subset(&ctx, &c);
    let block = submatrix(&c, &second_class);
    let det = determinant(&ctx, &block);
    let adj = adjugate(&ctx, &block);
    for (i, class) in psi.classification.iter_mut().enumerate() {
        *class = if second_class.contains(&i) {
            ConstraintClass::SecondClass
        } else {
            let mut first = true;
            for entry in &c[i] {
                if !surface.is_weakly_zero(entry)? {
                    first = false;
                    break;
                }
            }
            if first {
                ConstraintClass::FirstClass
            } else {
                ConstraintClass::Undetermined
            }
        };
    }
    let c_inv = if second_class.len() == psi.len() && !psi.is_empty() {
        Some(inverse_from_adjugate(&adj, &det)?)
    } else {
        None
    };

    Ok(ConstraintAnalysis {
        ctx,
        options: options.clone(),
        hamiltonian: h.clone(),
        extended,
        psi,
        c,
        second_class,
        det,
        adj,
        c_inv,
        multipliers,
        total_hamiltonian: total,
        surface,
        trace,
    })
}

fn record_candidate(
    ctx: &Ctx,
    psi: &mut ConstraintSet,
    expr: GradedPolynomial,
    stage: usize,
    index: usize,
) -> Result<TraceOutcome> {
    if psi.constraints.iter().any(|c| proportional(&c.expr, &expr)) {
        return Ok(TraceOutcome::Duplicate);
    }
    let surface = ConstraintSurface::new(ctx, &psi.exprs());
    if surface.is_weakly_zero(&expr)? {
        return Ok(TraceOutcome::WeaklyZero);
    }
    psi.push(expr, stage, index);
    Ok(TraceOutcome::NewConstraint(psi.len() - 1))
}

fn solve_multipliers(ctx: &Ctx, elim: Option<&Elimination>, count: usize) -> Result<Vec<Multiplier>> {
    let mut out = vec![Multiplier::Free; count];
    let Some(elim) = elim else { return Ok(out) };
    let free = elim.free_columns(count);
    for &(r, col) in &elim.pivots {
        let row = &elim.rows[r];
        let value = RationalFunction::new(row[count].clone(), row[col].clone())?;
        let _ = ctx;
        out[col] = if free.iter().any(|&f| !row[f].is_zero()) {
            Multiplier::Gauge(value)
        } else {
            Multiplier::Determined(value)
        };
    }
    Ok(out)
}

/// `C_{αβ} = {Ψ_α, Ψ_β}_epb`.
pub fn constraint_matrix(psi: &ConstraintSet) -> PolyMatrix {
    let m = psi.len();
    (0..m)
        .into_par_iter()
        .map(|a| {
            (0..m)
                .map(|b| epb(&psi.constraints[a].expr, &psi.constraints[b].expr))
                .collect()
        })
        .collect()
}

fn submatrix(c: &PolyMatrix, idx: &[usize]) -> PolyMatrix {
    idx.iter().map(|&i| idx.iter().map(|&j| c[i][j].clone()).collect()).collect()
}

fn nonsingular(ctx: &Ctx, m: &PolyMatrix) -> bool {
    !determinant(ctx, m).bosonic_part().is_zero()
}

/// Largest principal block with a nonvanishing determinant; the first one in
/// lexicographic order among blocks of that size.
fn second_class_subset(ctx: &Ctx, c: &PolyMatrix) -> Vec<usize> {
    let m = c.len();
    for size in (1..=m).rev() {
        let mut found = None;
        combinations(m, size, &mut Vec::new(), &mut |combo| {
            if found.is_none() && nonsingular(ctx, &submatrix(c, combo)) {
                found = Some(combo.to_vec());
            }
        });
        if let Some(combo) = found {
            return combo;
        }
    }
    Vec::new()
}

fn combinations(m: usize, k: usize, prefix: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
    if prefix.len() == k {
        visit(prefix);
        return;
    }
    let start = prefix.last().map_or(0, |&l| l + 1);
    for i in start..m {
        if m - i < k - prefix.len() {
            break;
        }
        prefix.push(i);
        combinations(m, k, prefix, visit);
        prefix.pop();
    }
}

fn inverse_from_adjugate(adj: &PolyMatrix, det: &GradedPolynomial) -> Result<Vec<Vec<RationalFunction>>> {
    adj.iter()
        .map(|row| {
            row.iter()
                .map(|x| RationalFunction::new(x.clone(), det.clone()))
                .collect()
        })
        .collect()
}

/// `C⁻¹` by adjugate over determinant; a vanishing determinant signals
/// first-class constraints.
pub fn invert_constraint_matrix(c: &PolyMatrix, ctx: &Ctx) -> Result<Vec<Vec<RationalFunction>>> {
    if c.is_empty() {
        return Ok(Vec::new());
    }
    let det = determinant(ctx, c);
    if det.bosonic_part().is_zero() {
        return Err(Error::FirstClass);
    }
    inverse_from_adjugate(&adjugate(ctx, c), &det)
}

/// `{N1/D1, N2/D2}_epb` by the quotient rule.
pub fn epb_rational(f: &RationalFunction, g: &RationalFunction) -> RationalFunction {
    let (n1, d1, n2, d2) = (f.num(), f.den(), g.num(), g.den());
    let one1 = f.is_polynomial();
    let one2 = g.is_polynomial();
    let result = match (one1, one2) {
        (true, true) => return RationalFunction::from_poly(epb(n1, n2)),
        (true, false) => {
            let num = &(&epb(n1, n2) * d2) - &(&epb(n1, d2) * n2);
            RationalFunction::new(num, d2 * d2)
        }
        (false, true) => {
            let num = &(&epb(n1, n2) * d1) - &(n1 * &epb(d1, n2));
            RationalFunction::new(num, d1 * d1)
        }
        (false, false) => {
            let first = &(&epb(n1, n2) * d1) - &(n1 * &epb(d1, n2));
            let second = &(&epb(n1, d2) * d1) - &(n1 * &epb(d1, d2));
            let num = &(&first * d2) - &(&second * n2);
            let dd1 = d1 * d1;
            let dd2 = d2 * d2;
            RationalFunction::new(num, &dd1 * &dd2)
        }
    };
    result.expect("denominators are nonzero")
}

/// `{F,G}_edb = {F,G}_epb − {F,Ψ_α}_epb C^{αβ} {Ψ_β,G}_epb` over the
/// second-class constraints.
pub fn dirac_bracket(
    f: &RationalFunction,
    g: &RationalFunction,
    analysis: &ConstraintAnalysis,
) -> Result<RationalFunction> {
    let base = epb_rational(f, g);
    let s = &analysis.second_class;
    if s.is_empty() {
        return Ok(base);
    }
    let psi: Vec<RationalFunction> = s
        .iter()
        .map(|&i| RationalFunction::from_poly(analysis.psi.constraints[i].expr.clone()))
        .collect();
    let left: Vec<RationalFunction> = psi.iter().map(|p| epb_rational(f, p)).collect();
    let right: Vec<RationalFunction> = psi.iter().map(|p| epb_rational(p, g)).collect();
    let mut corr = RationalFunction::zero(&analysis.ctx);
    for (a, l) in left.iter().enumerate() {
        if l.is_zero() {
            continue;
        }
        for (b, r) in right.iter().enumerate() {
            let entry = &analysis.adj[a][b];
            if entry.is_zero() || r.is_zero() {
                continue;
            }
            let mid = l * &RationalFunction::from_poly(entry.clone());
            corr = &corr + &(&mid * r);
        }
    }
    let corr = corr.checked_div(&RationalFunction::from_poly(analysis.det.clone()))?;
    Ok(&base - &corr)
}

pub fn dirac_bracket_poly(
    f: &GradedPolynomial,
    g: &GradedPolynomial,
    analysis: &ConstraintAnalysis,
) -> Result<RationalFunction> {
    dirac_bracket(
        &RationalFunction::from_poly(f.clone()),
        &RationalFunction::from_poly(g.clone()),
        analysis,
    )
}

#[derive(Clone, Debug, PartialEq)]
pub struct Evolution {
    /// `{F, H̃_T}_edb` before reduction to the constraint surface.
    pub raw: RationalFunction,
    /// `{F, H̃_T}_edb` on the constraint surface.
    pub value: RationalFunction,
    /// `{F, H̃}_edb` on the constraint surface.
    pub without_multipliers: RationalFunction,
    pub multipliers_irrelevant: bool,
}

/// `{F, H̃_T}_edb` for a phase-space observable `F`.
pub fn constrained_evolution(f: &GradedPolynomial, analysis: &ConstraintAnalysis) -> Result<Evolution> {
    f.require_phase_space()?;
    let f = RationalFunction::from_poly(f.clone());
    let raw = dirac_bracket(&f, &analysis.total_hamiltonian, analysis)?;
    let value = analysis.surface.reduce_rational(&raw)?;
    let bare = dirac_bracket(
        &f,
        &RationalFunction::from_poly(analysis.extended.clone()),
        analysis,
    )?;
    let without_multipliers = analysis.surface.reduce_rational(&bare)?;
    let multipliers_irrelevant = value == without_multipliers;
    Ok(Evolution {
        raw,
        value,
        without_multipliers,
        multipliers_irrelevant,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Comparison {
    pub observable: GradedPolynomial,
    pub constrained: RationalFunction,
    pub moyal: GradedPolynomial,
    /// `constrained − moyal`.
    pub difference: RationalFunction,
    /// λ-free part of a polynomial difference.
    pub difference_phase_space: Option<GradedPolynomial>,
    /// λ-bearing part of a polynomial difference, reported separately.
    pub lambda_remainder: Option<GradedPolynomial>,
    pub equal: bool,
    pub multipliers_irrelevant: bool,
}

/// Compare `{F, H̃_T}_edb` with the Moyal evolution `{F, H}_M`.
pub fn compare_evolutions(
    analysis: &ConstraintAnalysis,
    f: &GradedPolynomial,
    order: Option<u32>,
) -> Result<Comparison> {
    let evolution = constrained_evolution(f, analysis)?;
    let m = analysis.options.hbar.apply(&moyal(f, &analysis.hamiltonian, order)?);
    let difference = &evolution.value - &RationalFunction::from_poly(m.clone());
    let (phase, lambda) = match difference.as_polynomial() {
        Some(p) => {
            let (free, rest) = p.split_lambda();
            (Some(free), Some(rest))
        }
        None => (None, None),
    };
    let equal = phase.as_ref().is_some_and(|p| p.is_zero());
    Ok(Comparison {
        observable: f.clone(),
        constrained: evolution.value,
        moyal: m,
        difference,
        difference_phase_space: phase,
        lambda_remainder: lambda,
        equal,
        multipliers_irrelevant: evolution.multipliers_irrelevant,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse, SymplecticContext};

    fn ctx1() -> Ctx {
        SymplecticContext::standard(1).unwrap()
    }

    fn p(s: &str, ctx: &Ctx) -> GradedPolynomial {
        parse(s, ctx).unwrap()
    }

    fn analyse(h: &str) -> ConstraintAnalysis {
        let ctx = ctx1();
        consistency_iteration(&p(h, &ctx), &DiracOptions::default()).unwrap()
    }

    #[test]
    fn primaries() {
        let ctx = ctx1();
        let set = primary_constraints(&ctx, &HbarMode::Symbolic);
        assert_eq!(set.len(), 1);
        assert_eq!(set.constraints[0].expr.to_string(), "p - hbar*l_q");
        let set = primary_constraints(&ctx, &HbarMode::Numeric(Scalar::zero()));
        assert_eq!(set.constraints[0].expr.to_string(), "p");
        let ctx2 = SymplecticContext::standard(2).unwrap();
        let set = primary_constraints(&ctx2, &HbarMode::Symbolic);
        assert_eq!(set.len(), 2);
        assert_eq!(set.constraints[0].index, 2);
    }

    #[test]
    fn harmonic_oscillator() {
        let a = analyse("1/2*p^2 + 1/2*q^2");
        let ctx = a.ctx.clone();
        assert_eq!(a.psi.len(), 2);
        assert_eq!(a.stages(), 1);
        assert_eq!(a.psi.constraints[1].expr.to_string(), "-q - hbar*l_p");
        assert_eq!(a.c[0][1].to_string(), "-2*hbar");
        assert_eq!(a.c[1][0].to_string(), "2*hbar");
        let inv = a.c_inv.as_ref().unwrap();
        assert_eq!(inv[0][1].to_string(), "(1/2)/(hbar)");
        assert!(matches!(a.multipliers[0], Multiplier::Determined(_)));
        let q = constrained_evolution(&p("q", &ctx), &a).unwrap();
        assert_eq!(q.value.to_string(), "p");
        assert!(q.multipliers_irrelevant);
        let pp = constrained_evolution(&p("p", &ctx), &a).unwrap();
        assert_eq!(pp.value.to_string(), "-q");
        let qp = constrained_evolution(&p("q*p", &ctx), &a).unwrap();
        assert_eq!(qp.value.to_string(), "-q^2 + p^2");
        let e = constrained_evolution(&p("q^2 + p^2", &ctx), &a).unwrap();
        assert!(e.value.is_zero());
    }

    #[test]
    fn quartic() {
        let a = analyse("1/2*p^2 + 1/4*q^4");
        let ctx = a.ctx.clone();
        assert_eq!(a.psi.len(), 2);
        assert_eq!(a.psi.constraints[1].expr.to_string(), "-q^3 - 3*hbar*q^2*l_p");
        let q = compare_evolutions(&a, &p("q", &ctx), None).unwrap();
        assert_eq!(q.constrained.to_string(), "3/2*p");
        assert_eq!(q.difference.to_string(), "1/2*p");
        assert!(!q.equal);
        let pp = compare_evolutions(&a, &p("p", &ctx), None).unwrap();
        assert_eq!(pp.constrained.to_string(), "-q^3");
        assert!(pp.equal);
    }

    #[test]
    fn constraints_are_preserved() {
        let a = analyse("1/2*p^2 + 1/4*q^4");
        for c in a.primaries() {
            let flow = epb_rational(&RationalFunction::from_poly(c.clone()), &a.total_hamiltonian);
            assert!(a.surface.reduce_rational(&flow).unwrap().is_zero());
        }
    }

    #[test]
    fn bracket_annihilates_constraints() {
        let a = analyse("1/2*p^2 + 1/4*q^4");
        let ctx = a.ctx.clone();
        let f = p("q^2*p + l_q*q - 3*hbar*l_p^2", &ctx);
        for c in &a.psi.constraints {
            assert!(dirac_bracket_poly(&c.expr, &f, &a).unwrap().is_zero());
            assert!(dirac_bracket_poly(&f, &c.expr, &a).unwrap().is_zero());
        }
    }

    #[test]
    fn adjugate_inverts_quartic_matrix() {
        let a = analyse("1/2*p^2 + 1/4*q^4");
        let prod = crate::linalg::mat_mul(&a.ctx, &a.c, &a.adj);
        for (i, row) in prod.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                let expect = if i == j { a.det.clone() } else { GradedPolynomial::zero(&a.ctx) };
                assert_eq!(x, &expect);
            }
        }
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(a.c[i][j], -&a.c[j][i]);
            }
        }
        let inv = a.c_inv.as_ref().unwrap();
        assert!(inv[0][1].den().total_degree() >= 2);
    }

    #[test]
    fn singular_matrix_is_first_class() {
        let ctx = ctx1();
        let z = GradedPolynomial::zero(&ctx);
        let c = vec![vec![z.clone(), z.clone()], vec![z.clone(), z]];
        assert_eq!(invert_constraint_matrix(&c, &ctx), Err(Error::FirstClass));
    }

    #[test]
    fn free_particle_has_first_class_primary() {
        let a = analyse("1/2*p^2");
        assert_eq!(a.psi.len(), 1);
        assert_eq!(a.psi.classification[0], ConstraintClass::FirstClass);
        assert!(a.c_inv.is_none());
        let ctx = a.ctx.clone();
        let q = constrained_evolution(&p("q", &ctx), &a).unwrap();
        assert!(q.value.num().has_lambda() || q.value.to_string() == "p");
    }

    #[test]
    fn ghost_mode_surfaces_bilinears() {
        let ctx = ctx1();
        let opts = DiracOptions {
            include_ghosts: true,
            ..DiracOptions::default()
        };
        let a = consistency_iteration(&p("1/2*p^2 + 1/4*q^4", &ctx), &opts).unwrap();
        let ghosts = a.ghost_terms();
        assert!(ghosts[0].is_zero());
        // −iħ ω^{ab} c̄_d ∂_b∂_e h^d c^e at a = p
        assert_eq!(ghosts[1], p("-6*i*hbar*q*cb1*c0", &ctx));
        let b = consistency_iteration(&p("1/2*p^2 + 1/2*q^2", &ctx), &opts).unwrap();
        assert!(b.ghost_terms().iter().all(|g| g.is_zero()));
    }

    #[test]
    fn xi_flag_leaves_evolution_unchanged() {
        let ctx = ctx1();
        let h = p("1/2*p^2 + 1/4*q^4", &ctx);
        let bare = consistency_iteration(&h, &DiracOptions::default()).unwrap();
        let opts = DiracOptions {
            xi: Some(vec![p("q + 2", &ctx)]),
            ..DiracOptions::default()
        };
        let with = consistency_iteration(&h, &opts).unwrap();
        for f in ["q", "p", "q^2*p"] {
            let f = p(f, &ctx);
            assert_eq!(
                constrained_evolution(&f, &bare).unwrap().value,
                constrained_evolution(&f, &with).unwrap().value
            );
        }
    }

    #[test]
    fn combinations_cover_subsets() {
        let ctx = ctx1();
        let z = GradedPolynomial::zero(&ctx);
        let one = GradedPolynomial::one(&ctx);
        // only the (1, 2) block is invertible
        let c = vec![
            vec![z.clone(), z.clone(), z.clone()],
            vec![z.clone(), z.clone(), one.clone()],
            vec![z.clone(), -&one, z.clone()],
        ];
        assert_eq!(second_class_subset(&ctx, &c), vec![1, 2]);
    }
}
