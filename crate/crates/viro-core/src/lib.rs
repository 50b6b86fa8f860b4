//! Exact-arithmetic toolkit for combinatorial patchworking.
//!
//! The crate builds piecewise-linear models of real algebraic hypersurfaces
//! from lattice polytopes equipped with convex triangulations and sign data,
//! computes their mod-2 Betti numbers, constructs triangulations and sign
//! distributions that maximize the number of connected components, and
//! handles complete intersections through Cayley polytopes and mixed
//! subdivisions.  All geometric predicates are evaluated in exact rational
//! arithmetic; no floating-point comparison ever decides a result (floats are
//! used only to *propose* certificates that are then verified exactly).

pub mod cayley;
pub mod complex;
pub mod error;
pub mod formulas;
pub mod gf2;
pub mod hull;
pub mod layered;
pub mod linalg;
pub mod lp;
pub mod patchwork;
pub mod polytope;
pub mod triangulation;

pub use error::{Error, Result};

/// Exact rational scalar used across the crate.
pub type Rat = num_rational::BigRational;
/// Exact integer scalar used across the crate.
pub type Int = num_bigint::BigInt;

/// Build a [`Rat`] from an integer numerator.
pub fn rat_int(n: impl Into<Int>) -> Rat {
    Rat::from_integer(n.into())
}

/// Build a [`Rat`] from numerator and denominator.
pub fn rat(n: impl Into<Int>, d: impl Into<Int>) -> Rat {
    Rat::new(n.into(), d.into())
}

/// Build an [`Int`] from a machine integer.
pub fn int(n: impl Into<Int>) -> Int {
    n.into()
}
