//! Reduction modulo the constraint ideal by explicit substitution.
//!
//! Every constraint built from `Φ_(0) = φ^a + ħω^{ab}λ_b` and a bosonic
//! extended Hamiltonian is linear in the `λ`'s, so the surface is described
//! by solving those constraints for as many `λ`'s as their coefficient
//! matrix allows. Relations that involve no `λ` are kept as residuals.

use crate::algebra::{Ctx, GradedPolynomial, RationalFunction, Variable};
use crate::error::{Error, Result};
use crate::linalg::eliminate;

#[derive(Clone, Debug)]
pub struct ConstraintSurface {
    ctx: Ctx,
    /// `λ_c = num / den` for each solved `λ_c`.
    solutions: Vec<(usize, GradedPolynomial, GradedPolynomial)>,
    /// λ-free relations left after elimination, and nonlinear constraints.
    residual: Vec<GradedPolynomial>,
}

impl ConstraintSurface {
    pub fn new(ctx: &Ctx, constraints: &[GradedPolynomial]) -> Self {
        let dim = ctx.dim();
        let mut rows = Vec::new();
        let mut residual = Vec::new();
        for c in constraints {
            if c.lambda_degree() > 1 {
                residual.push(c.clone());
                continue;
            }
            let coeffs: Vec<GradedPolynomial> =
                (0..dim).map(|b| c.derivative(Variable::Lambda(b))).collect();
            let (free, _) = c.split_lambda();
            let mut row = coeffs;
            row.push(-free);
            rows.push(row);
        }
        let elim = eliminate(ctx, rows, dim);
        let free_cols = elim.free_columns(dim);
        let mut solutions = Vec::new();
        for &(r, col) in &elim.pivots {
            let row = &elim.rows[r];
            let mut num = row[dim].clone();
            for &f in &free_cols {
                if !row[f].is_zero() {
                    num = &num - &(&row[f] * &GradedPolynomial::lambda(ctx, f));
                }
            }
            solutions.push((col, num, row[col].clone()));
        }
        residual.extend(elim.consequences());
        ConstraintSurface {
            ctx: ctx.clone(),
            solutions,
            residual,
        }
    }

    /// Solved `λ`'s as `(index, value)`.
    pub fn solutions(&self) -> Vec<(usize, RationalFunction)> {
        self.solutions
            .iter()
            .map(|(c, n, d)| {
                (
                    *c,
                    RationalFunction::new(n.clone(), d.clone()).expect("nonzero pivot"),
                )
            })
            .collect()
    }

    pub fn residual(&self) -> &[GradedPolynomial] {
        &self.residual
    }

    /// Substitute every solved `λ` into `p`.
    pub fn reduce(&self, p: &GradedPolynomial) -> Result<RationalFunction> {
        let ctx = &self.ctx;
        if self.solutions.is_empty() || !p.has_lambda() {
            return Ok(RationalFunction::from_poly(p.clone()));
        }
        // Expand p = Σ_k Π λ_{c_i}^{e_i} · rest_k, one solved λ at a time,
        // keeping a common denominator Π den_i^{E_i}.
        let mut num = p.clone();
        let mut den = GradedPolynomial::one(ctx);
        for (col, sol_num, sol_den) in &self.solutions {
            let v = Variable::Lambda(*col);
            let degree = num.degree_in(v);
            if degree == 0 {
                continue;
            }
            let parts = num.coefficients_in(v);
            let mut num_pows = vec![GradedPolynomial::one(ctx)];
            let mut den_pows = vec![GradedPolynomial::one(ctx)];
            for k in 1..=degree as usize {
                num_pows.push(&num_pows[k - 1] * sol_num);
                den_pows.push(&den_pows[k - 1] * sol_den);
            }
            let mut next = GradedPolynomial::zero(ctx);
            for (k, part) in parts.iter().enumerate() {
                if part.is_zero() {
                    continue;
                }
                let factor = &num_pows[k] * &den_pows[degree as usize - k];
                next = &next + &(part * &factor);
            }
            num = next;
            den = &den * &den_pows[degree as usize];
        }
        RationalFunction::new(num, den)
    }

    pub fn reduce_rational(&self, r: &RationalFunction) -> Result<RationalFunction> {
        if r.is_polynomial() {
            return self.reduce(r.num());
        }
        let num = self.reduce(r.num())?;
        let den = self.reduce(r.den())?;
        if den.is_zero() {
            return Err(Error::SingularOnSurface);
        }
        num.checked_div(&den)
    }

    pub fn is_weakly_zero(&self, p: &GradedPolynomial) -> Result<bool> {
        Ok(self.reduce(p)?.is_zero())
    }
}
