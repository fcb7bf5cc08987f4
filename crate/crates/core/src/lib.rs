//! Exact computer algebra for ħ-dependent constraints on extended phase space.
//!
//! The crate is organised bottom-up:
//!
//! * [`algebra`]: Gaussian-rational graded polynomials over `φ, λ, ħ` and
//!   the ghosts `c, c̄`, with a parser and a canonical printer.
//! * [`brackets`]: Poisson, extended Poisson and (terminating) Moyal brackets.
//! * [`lift`]: the extended Hamiltonian, its ħ-series, the `λ → -i∂`
//!   operator substitution and the coefficient-matching oracle.
//! * [`dirac`]: primary/secondary constraints, the constraint matrix, Dirac
//!   brackets, multipliers and the classical-vs-Moyal evolution comparison.
//! * [`wigner`]: floating-point Wigner transforms of oscillator eigenstates
//!   and the norm/marginal/quantisation-rule checks.

pub mod algebra;
pub mod brackets;
pub mod dirac;
mod error;
pub mod lift;
mod linalg;
pub mod scalar;
pub mod wigner;

pub use algebra::{
    format_canonical, parse, Ctx, GradedPolynomial, Parity, RationalFunction, SymplecticContext,
    Variable,
};
pub use brackets::BracketKind;
pub use error::{Error, Result};
pub use scalar::Scalar;

#[cfg(test)]
mod test_support;
