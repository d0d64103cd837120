//! Exact scalar tower and structured linear algebra.
//!
//! Scalars are [`Rational`] (arbitrary precision), [`Polynomial`] over the
//! rationals and the fraction field [`RationalFunction`]. [`Matrix`] is dense
//! and generic over any [`Ring`]; elimination routines pick the weakest
//! structure they need ([`Domain`] for fraction-free work, [`Field`] for
//! reduced echelon forms).

mod factor;
mod linalg;
mod matrix;
mod pfaffian;
mod polynomial;
mod ratfunc;
mod rational;
mod smith;

pub use factor::{factor_squarefree, irreducible_factors, numeric_roots, Factorization};
pub use linalg::{determinant, inverse, kernel_basis, rank, rref, solve_left};
pub use matrix::Matrix;
pub use pfaffian::{pfaffian, pfaffian_by_expansion, polynomial_pfaffian};
pub use polynomial::{poly_gcd, Polynomial};
pub use ratfunc::RationalFunction;
pub use rational::{parse_rational, rat, rational_from_f64, rational_to_f64, Rational};
pub use smith::{smith_normal_form, SmithForm};

use num::{One, Zero};
use std::fmt::Debug;
use std::ops::{Div, Mul, Neg, Sub};

/// Commutative ring with identity, operated on by value.
pub trait Ring:
    Clone + PartialEq + Debug + Zero + One + Neg<Output = Self> + Sub<Output = Self> + Mul<Output = Self>
{
}

impl<T> Ring for T where
    T: Clone + PartialEq + Debug + Zero + One + Neg<Output = Self> + Sub<Output = Self> + Mul<Output = Self>
{
}

/// Integral domain with exact division (the quotient is known to exist).
pub trait Domain: Ring {
    fn exact_div(&self, divisor: &Self) -> Self;
}

/// Field: every nonzero element is invertible.
pub trait Field: Domain + Div<Output = Self> {}

impl Domain for Rational {
    fn exact_div(&self, divisor: &Self) -> Self {
        self / divisor
    }
}

impl Field for Rational {}
