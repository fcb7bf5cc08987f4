//! Exact graded polynomial arithmetic, parsing and canonical printing.

mod context;
mod format;
mod monomial;
mod parse;
mod poly;
mod ratfunc;

pub use context::{Ctx, SymplecticContext, Variable, MAX_DEGREES_OF_FREEDOM};
pub use format::format_canonical;
pub use monomial::Monomial;
pub use parse::parse;
pub use poly::{GradedPolynomial, Parity};
pub use ratfunc::RationalFunction;

