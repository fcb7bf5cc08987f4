//! Small exact linear algebra over polynomials and Gaussian rationals.

use crate::algebra::{Ctx, GradedPolynomial, Parity};
use crate::scalar::Scalar;

pub(crate) type PolyMatrix = Vec<Vec<GradedPolynomial>>;

/// Determinant by Laplace expansion along the first row. Matrices here are
/// at most a few rows, so cofactor expansion is cheaper than tracking
/// exact divisions.
pub(crate) fn determinant(ctx: &Ctx, m: &PolyMatrix) -> GradedPolynomial {
    let size = m.len();
    match size {
        0 => return GradedPolynomial::one(ctx),
        1 => return m[0][0].clone(),
        2 => return &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]),
        _ => {}
    }
    let mut acc = GradedPolynomial::zero(ctx);
    for col in 0..size {
        if m[0][col].is_zero() {
            continue;
        }
        let minor = minor(m, 0, col);
        let term = &m[0][col] * &determinant(ctx, &minor);
        acc = if col % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

fn minor(m: &PolyMatrix, row: usize, col: usize) -> PolyMatrix {
    m.iter()
        .enumerate()
        .filter(|(r, _)| *r != row)
        .map(|(_, cells)| {
            cells
                .iter()
                .enumerate()
                .filter(|(c, _)| *c != col)
                .map(|(_, x)| x.clone())
                .collect()
        })
        .collect()
}

/// Classical adjugate: `adj[i][j] = (-1)^{i+j} det(minor(j, i))`.
pub(crate) fn adjugate(ctx: &Ctx, m: &PolyMatrix) -> PolyMatrix {
    let size = m.len();
    if size == 1 {
        return vec![vec![GradedPolynomial::one(ctx)]];
    }
    (0..size)
        .map(|i| {
            (0..size)
                .map(|j| {
                    let d = determinant(ctx, &minor(m, j, i));
                    if (i + j) % 2 == 0 {
                        d
                    } else {
                        -d
                    }
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
pub(crate) fn mat_mul(ctx: &Ctx, a: &PolyMatrix, b: &PolyMatrix) -> PolyMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    (0..inner).fold(GradedPolynomial::zero(ctx), |acc, k| {
                        &acc + &(&row[k] * &b[k][j])
                    })
                })
                .collect()
        })
        .collect()
}

/// Result of fraction-free Gauss–Jordan elimination on an augmented
/// polynomial system `[A | b]`.
#[derive(Debug, Clone)]
pub(crate) struct Elimination {
    /// Reduced augmented rows; the last entry of each row is the rhs.
    pub rows: PolyMatrix,
    /// `(row, column)` of each pivot.
    pub pivots: Vec<(usize, usize)>,
}

impl Elimination {
    /// Columns without a pivot.
    pub fn free_columns(&self, ncols: usize) -> Vec<usize> {
        (0..ncols)
            .filter(|c| !self.pivots.iter().any(|&(_, pc)| pc == *c))
            .collect()
    }

    /// Right-hand sides of rows whose coefficient part vanished.
    pub fn consequences(&self) -> Vec<GradedPolynomial> {
        self.rows[self.pivots.len()..]
            .iter()
            .map(|r| r.last().expect("augmented").clone())
            .filter(|p| !p.is_zero())
            .collect()
    }
}

/// Fraction-free Gauss–Jordan: `row_j ← pivot·row_j − a_j·row_pivot`.
/// Pivots must be even with a nonzero ghost-free body, and ghost-free ones
/// are preferred; rows are divided by their common monomial factor after
/// each step to slow coefficient growth.
pub(crate) fn eliminate(ctx: &Ctx, mut rows: PolyMatrix, ncols: usize) -> Elimination {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let candidate = (r..rows.len())
            .filter(|&i| usable_pivot(&rows[i][col]))
            .min_by_key(|&i| (rows[i][col].has_ghosts(), rows[i][col].len()));
        let Some(p) = candidate else { continue };
        rows.swap(r, p);
        let pivot_row = rows[r].clone();
        let pivot = pivot_row[col].clone();
        for (j, row) in rows.iter_mut().enumerate() {
            if j == r || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x = &(&pivot * x) - &(&factor * y);
            }
            strip_row_content(ctx, row);
        }
        pivots.push((r, col));
        r += 1;
    }
    Elimination { rows, pivots }
}

fn usable_pivot(p: &GradedPolynomial) -> bool {
    if p.is_zero() {
        return false;
    }
    !p.has_ghosts() || (p.parity() == Some(Parity::Even) && !p.bosonic_part().is_zero())
}

fn strip_row_content(ctx: &Ctx, row: &mut [GradedPolynomial]) {
    let mut content: Option<crate::algebra::Monomial> = None;
    for x in row.iter().filter(|x| !x.is_zero()) {
        let m = x.monomial_content();
        content = Some(match content {
            None => {
                let mut m = m;
                m.ghosts = 0;
                m
            }
            Some(mut c) => {
                for (e, v) in c.exps.iter_mut().zip(&m.exps) {
                    *e = (*e).min(*v);
                }
                c
            }
        });
    }
    if let Some(c) = content.filter(|c| !c.is_one()) {
        for x in row.iter_mut() {
            if !x.is_zero() {
                *x = x.div_monomial(&c);
            }
        }
    }
    let _ = ctx;
}

/// Outcome of an exact scalar linear solve `A x = b`.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct ScalarSolution {
    pub rank: usize,
    pub consistent: bool,
    /// Value per unknown; `None` for free unknowns.
    pub values: Vec<Option<Scalar>>,
}

pub(crate) fn solve_scalar(mut rows: Vec<Vec<Scalar>>, ncols: usize) -> ScalarSolution {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].inv().expect("nonzero pivot");
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = rows[r].clone();
        for (j, row) in rows.iter_mut().enumerate() {
            if j == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x = &*x - &(&f * y);
            }
        }
        pivots.push((r, col));
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    let consistent = rows[r..].iter().all(|row| row[ncols].is_zero());
    let mut values = vec![None; ncols];
    let rank = pivots.len();
    if rank == ncols {
        for &(row, col) in &pivots {
            values[col] = Some(rows[row][ncols].clone());
        }
    } else {
        for &(row, col) in &pivots {
            let depends_on_free = (0..ncols)
                .any(|c| c != col && !rows[row][c].is_zero());
            if !depends_on_free {
                values[col] = Some(rows[row][ncols].clone());
            }
        }
    }
    ScalarSolution {
        rank,
        consistent,
        values,
    }
}
