//! Exact invariants of skew-symmetric pencils `A + λB` and of pencils of
//! compatible Poisson structures on polynomial charts.
//!
//! The crate is layered bottom-up:
//!
//! - [`algebra`]: rationals, univariate polynomials, rational functions,
//!   dense matrices, fraction-free elimination, Pfaffians and the Smith form.
//! - [`pencil`]: rank, characteristic polynomial, eigenvalues, core subspace
//!   and Jordan–Kronecker invariants of a constant skew pencil.
//! - [`subspace`]: bi-isotropic / admissible / bi-Lagrangian subspaces, the
//!   recursion operator, linear bi-Poisson reduction and eigen-splitting.
//! - [`charts`]: polynomial Poisson bivectors, Jacobi and compatibility
//!   identities, Casimir shifts, bi-involution and standard-integral checks.
//! - [`flows`]: double-precision integration of bi-Hamiltonian fields and
//!   drift monitoring of first integrals.
//! - [`corpus`]: the bundled example pencils and charts.
//!
//! Everything except [`flows`] and the eigenvalue-differential check is exact.

pub mod algebra;
pub mod charts;
pub mod corpus;
mod error;
pub mod flows;
pub mod pencil;
pub mod subspace;

pub use algebra::{Matrix, Polynomial, Rational, RationalFunction};
pub use error::{Error, Result};
pub use pencil::{Eigenvalue, JkInvariants, PencilEigenvalue, SkewPencil};
pub use subspace::Subspace;
