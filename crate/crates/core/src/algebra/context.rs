use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A generator of the graded algebra.
///
/// Phase-space indices run over `0..2n`; the first `n` are the `q`'s and the
/// last `n` the `p`'s.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variable {
    Phi(usize),
    Lambda(usize),
    /// Ghost `c^a` (odd).
    C(usize),
    /// Anti-ghost `c̄_a` (odd).
    CBar(usize),
    Hbar,
}

impl Variable {
    pub fn is_odd(self) -> bool {
        matches!(self, Variable::C(_) | Variable::CBar(_))
    }

    pub fn index(self) -> Option<usize> {
        match self {
            Variable::Phi(a) | Variable::Lambda(a) | Variable::C(a) | Variable::CBar(a) => Some(a),
            Variable::Hbar => None,
        }
    }
}

/// Dimension and symplectic matrix `ω^{ab}` of the base phase space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticContext {
    n: usize,
    omega: Vec<Vec<Scalar>>,
}

/// Shared handle; every polynomial carries one.
pub type Ctx = Arc<SymplecticContext>;

/// Ghost bit-sets are `u64`, two ghosts per phase-space index.
pub const MAX_DEGREES_OF_FREEDOM: usize = 16;

impl SymplecticContext {
    /// Standard block form with `ω^{q_i p_i} = +1`, `ω^{p_i q_i} = -1`.
    pub fn standard(n: usize) -> Result<Ctx> {
        if n == 0 {
            return Err(Error::InvalidContext("n must be positive".into()));
        }
        let dim = 2 * n;
        let mut omega = vec![vec![Scalar::zero(); dim]; dim];
        for i in 0..n {
            omega[i][n + i] = Scalar::one();
            omega[n + i][i] = Scalar::from_int(-1);
        }
        SymplecticContext::with_omega(n, omega)
    }

    pub fn with_omega(n: usize, omega: Vec<Vec<Scalar>>) -> Result<Ctx> {
        if n == 0 || n > MAX_DEGREES_OF_FREEDOM {
            return Err(Error::InvalidContext(format!(
                "n must lie in 1..={MAX_DEGREES_OF_FREEDOM}"
            )));
        }
        let dim = 2 * n;
        if omega.len() != dim || omega.iter().any(|row| row.len() != dim) {
            return Err(Error::InvalidContext(format!("omega must be {dim}x{dim}")));
        }
        for (a, row) in omega.iter().enumerate() {
            for (b, x) in row.iter().enumerate() {
                if *x != -&omega[b][a] {
                    return Err(Error::InvalidContext("omega is not antisymmetric".into()));
                }
            }
        }
        if scalar_determinant(&omega).is_zero() {
            return Err(Error::InvalidContext("omega is singular".into()));
        }
        Ok(Arc::new(SymplecticContext { n, omega }))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Phase-space dimension `2n`.
    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn omega(&self, a: usize, b: usize) -> &Scalar {
        &self.omega[a][b]
    }

    pub fn omega_matrix(&self) -> &[Vec<Scalar>] {
        &self.omega
    }

    pub fn is_standard(&self) -> bool {
        SymplecticContext::standard(self.n)
            .map(|s| s.omega == self.omega)
            .unwrap_or(false)
    }

    /// Number of commuting slots in a monomial: `φ`, `λ`, `ħ`.
    pub(crate) fn commuting_slots(&self) -> usize {
        4 * self.n + 1
    }

    pub(crate) fn hbar_slot(&self) -> usize {
        4 * self.n
    }

    pub(crate) fn slot(&self, v: Variable) -> usize {
        match v {
            Variable::Phi(a) => a,
            Variable::Lambda(a) => self.dim() + a,
            Variable::Hbar => self.hbar_slot(),
            _ => panic!("{v:?} has no commuting slot"),
        }
    }

    pub(crate) fn slot_variable(&self, slot: usize) -> Variable {
        let dim = self.dim();
        if slot < dim {
            Variable::Phi(slot)
        } else if slot < 2 * dim {
            Variable::Lambda(slot - dim)
        } else {
            Variable::Hbar
        }
    }

    /// Ghost bit position in the global canonical order
    /// `c^0 < c^1 < … < c̄_0 < c̄_1 < …`.
    pub(crate) fn ghost_bit(&self, v: Variable) -> u32 {
        match v {
            Variable::C(a) => a as u32,
            Variable::CBar(a) => (self.dim() + a) as u32,
            _ => panic!("{v:?} is not a ghost"),
        }
    }

    pub(crate) fn bit_variable(&self, bit: u32) -> Variable {
        let dim = self.dim() as u32;
        if bit < dim {
            Variable::C(bit as usize)
        } else {
            Variable::CBar((bit - dim) as usize)
        }
    }

    pub fn all_variables(&self) -> Vec<Variable> {
        let dim = self.dim();
        let mut out = Vec::with_capacity(4 * dim + 1);
        out.extend((0..dim).map(Variable::Phi));
        out.extend((0..dim).map(Variable::Lambda));
        out.extend((0..dim).map(Variable::C));
        out.extend((0..dim).map(Variable::CBar));
        out.push(Variable::Hbar);
        out
    }

    fn phi_base(&self, a: usize) -> String {
        let n = self.n;
        let (letter, i) = if a < n { ("q", a) } else { ("p", a - n) };
        if n == 1 {
            letter.to_string()
        } else {
            format!("{letter}{i}")
        }
    }

    /// Display name; `n = 1` uses the short aliases `q, p, l_q, l_p`.
    pub fn name(&self, v: Variable) -> String {
        match v {
            Variable::Phi(a) => self.phi_base(a),
            Variable::Lambda(a) => format!("l_{}", self.phi_base(a)),
            Variable::C(a) => format!("c{a}"),
            Variable::CBar(a) => format!("cb{a}"),
            Variable::Hbar => "hbar".to_string(),
        }
    }

    /// Resolve a name from the expression grammar.
    pub fn lookup(&self, name: &str) -> Option<Variable> {
        if name == "hbar" {
            return Some(Variable::Hbar);
        }
        let dim = self.dim();
        let n = self.n;
        let phi_index = |s: &str| -> Option<usize> {
            let (letter, rest) = s.split_at(1);
            let offset = match letter {
                "q" => 0,
                "p" => n,
                _ => return None,
            };
            if rest.is_empty() {
                return (n == 1).then_some(offset);
            }
            if rest.starts_with('+') {
                return None;
            }
            let i: usize = rest.parse().ok()?;
            (i < n).then_some(offset + i)
        };
        if let Some(rest) = name.strip_prefix("l_") {
            return (!rest.is_empty())
                .then(|| phi_index(rest))
                .flatten()
                .map(Variable::Lambda);
        }
        if let Some(rest) = name.strip_prefix("cb") {
            let a: usize = rest.parse().ok()?;
            return (a < dim && !rest.starts_with('+')).then_some(Variable::CBar(a));
        }
        if let Some(rest) = name.strip_prefix('c') {
            let a: usize = rest.parse().ok()?;
            return (a < dim && !rest.starts_with('+')).then_some(Variable::C(a));
        }
        if name.is_empty() {
            return None;
        }
        phi_index(name).map(Variable::Phi)
    }
}

impl fmt::Display for SymplecticContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} omega=[", self.n)?;
        for (i, row) in self.omega.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            let cells: Vec<String> = row.iter().map(|s| s.to_string()).collect();
            write!(f, "{}", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Determinant by exact Gaussian elimination over the Gaussian rationals.
pub(crate) fn scalar_determinant(m: &[Vec<Scalar>]) -> Scalar {
    let size = m.len();
    let mut a: Vec<Vec<Scalar>> = m.to_vec();
    let mut det = Scalar::one();
    for col in 0..size {
        let Some(pivot) = (col..size).find(|&r| !a[r][col].is_zero()) else {
            return Scalar::zero();
        };
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        let inv = a[col][col].inv().expect("nonzero pivot");
        det = &det * &a[col][col];
        for r in col + 1..size {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] * &inv;
            let (top, rest) = a.split_at_mut(r);
            for (x, y) in rest[0][col..].iter_mut().zip(&top[col][col..]) {
                *x -= &(&factor * y);
            }
        }
    }
    det
}
