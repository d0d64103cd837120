//! Constant skew-symmetric pencils `A + λB` over the rationals.
//!
//! Conventions used throughout:
//!
//! - the pencil parameter ranges over ℚ̄ ∪ {∞} with `A + ∞·B := B`;
//! - the characteristic polynomial is computed from `A + λB`, while an
//!   *eigenvalue* is a value `μ` at which `A − μB` drops rank. Eigenvalues
//!   are therefore the negated roots of the characteristic polynomial, and
//!   coincide with the eigenvalues of the recursion operator `B⁻¹A` when `B`
//!   is invertible;
//! - Jordan partitions count blocks in the `m × m` matrix convention: one
//!   skew `2m × 2m` block carries the elementary divisor `qᵐ` twice.

mod canonical;
mod jk;

pub use canonical::{canonical_pencil, complex_block, infinite_block, jordan_block, kronecker_block};
pub use jk::{same_bundle, JkInvariants, JordanBlocks};

use crate::algebra::{
    irreducible_factors, kernel_basis, numeric_roots, poly_gcd, polynomial_pfaffian, rank, Matrix, Polynomial,
    Rational, RationalFunction,
};
use crate::error::{Error, Result};
use crate::subspace::Subspace;
use nalgebra::Complex;
use num::{BigInt, One, Zero};
use std::fmt;

/// Variable name used for eigenvalue minimal polynomials.
pub const EIGEN_VAR: char = 't';

/// A point of the extended rational line ℚ ∪ {∞}.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Lambda {
    Finite(Rational),
    Infinity,
}

impl Lambda {
    pub fn int(v: i64) -> Self {
        Lambda::Finite(Rational::from_integer(v.into()))
    }

    /// `"inf"` or an exact rational `"p/q"`.
    pub fn parse(text: &str) -> Option<Self> {
        match text.trim() {
            "inf" | "∞" => Some(Lambda::Infinity),
            t => crate::algebra::parse_rational(t).map(Lambda::Finite),
        }
    }
}

impl fmt::Display for Lambda {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Lambda::Finite(v) => write!(f, "{v}"),
            Lambda::Infinity => write!(f, "inf"),
        }
    }
}

/// An eigenvalue, kept exactly as its minimal polynomial over ℚ.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Eigenvalue {
    /// Monic irreducible minimal polynomial in `t`.
    Finite(Polynomial),
    Infinite,
}

impl Eigenvalue {
    pub fn rational(mu: Rational) -> Self {
        Eigenvalue::Finite(Polynomial::linear_root(mu, EIGEN_VAR))
    }

    pub fn as_rational(&self) -> Option<Rational> {
        match self {
            Eigenvalue::Finite(q) if q.degree() == Some(1) => Some(-q.coeff(0)),
            _ => None,
        }
    }

    /// Number of complex eigenvalues represented (degree of the minimal polynomial).
    pub fn degree(&self) -> usize {
        match self {
            Eigenvalue::Finite(q) => q.degree().unwrap_or(0),
            Eigenvalue::Infinite => 1,
        }
    }

    /// Eigenvalue `μ + shift` (∞ is fixed).
    pub fn shifted(&self, shift: &Rational) -> Self {
        match self {
            Eigenvalue::Finite(q) => Eigenvalue::Finite(q.shift_roots(shift)),
            Eigenvalue::Infinite => Eigenvalue::Infinite,
        }
    }

    /// From an irreducible factor of the characteristic polynomial (root `r`
    /// of `A + λB`) to the eigenvalue `−r`.
    fn from_charpoly_factor(q: &Polynomial) -> Self {
        Eigenvalue::Finite(q.negate_variable().monic().with_var(EIGEN_VAR))
    }
}

impl fmt::Display for Eigenvalue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Eigenvalue::Finite(q) => match self.as_rational() {
                Some(mu) => write!(f, "{mu}"),
                None => write!(f, "root of {q}"),
            },
            Eigenvalue::Infinite => write!(f, "inf"),
        }
    }
}

/// An eigenvalue together with its multiplicity in the characteristic
/// polynomial and floating-point approximations of its complex roots.
#[derive(Clone, Debug, PartialEq)]
pub struct PencilEigenvalue {
    pub value: Eigenvalue,
    pub multiplicity: usize,
    pub approximations: Vec<Complex<f64>>,
}

/// A pair of skew-symmetric rational forms spanning the pencil `A + λB`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewPencil {
    a: Matrix<Rational>,
    b: Matrix<Rational>,
}

impl SkewPencil {
    pub fn new(a: Matrix<Rational>, b: Matrix<Rational>) -> Result<Self> {
        for m in [&a, &b] {
            if !m.is_square() {
                return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
            }
            if !m.is_skew() {
                return Err(Error::NotSkew);
            }
        }
        if a.rows() != b.rows() {
            return Err(Error::DimensionMismatch { expected: a.rows(), found: b.rows() });
        }
        Ok(SkewPencil { a, b })
    }

    pub fn zero(n: usize) -> Self {
        SkewPencil { a: Matrix::zeros(n, n), b: Matrix::zeros(n, n) }
    }

    pub fn dim(&self) -> usize {
        self.a.rows()
    }

    pub fn a(&self) -> &Matrix<Rational> {
        &self.a
    }

    pub fn b(&self) -> &Matrix<Rational> {
        &self.b
    }

    /// The form `A + λ₀B` (`B` at infinity).
    pub fn form_at(&self, lambda: &Lambda) -> Matrix<Rational> {
        match lambda {
            Lambda::Finite(l) => self.a.add(&self.b.scale(l)),
            Lambda::Infinity => self.b.clone(),
        }
    }

    /// `A + λB` as a matrix over ℚ[λ].
    pub fn symbolic(&self) -> Matrix<Polynomial> {
        let n = self.dim();
        Matrix::from_fn(n, n, |i, j| {
            Polynomial::new(vec![self.a[(i, j)].clone(), self.b[(i, j)].clone()], 'λ')
        })
    }

    /// The pencil `(B, A)`, i.e. `B + μA`, which exchanges 0 and ∞.
    pub fn swapped(&self) -> SkewPencil {
        SkewPencil { a: self.b.clone(), b: self.a.clone() }
    }

    /// `(Sᵀ A S, Sᵀ B S)`.
    pub fn congruence(&self, s: &Matrix<Rational>) -> SkewPencil {
        let st = s.transpose();
        SkewPencil { a: st.mul(&self.a).mul(s), b: st.mul(&self.b).mul(s) }
    }

    pub fn direct_sum(&self, other: &SkewPencil) -> SkewPencil {
        SkewPencil { a: self.a.direct_sum(&other.a), b: self.b.direct_sum(&other.b) }
    }

    /// `(A − μB, B)`: moves every finite eigenvalue by `−μ`.
    pub fn shift(&self, mu: &Rational) -> SkewPencil {
        SkewPencil { a: self.a.sub(&self.b.scale(mu)), b: self.b.clone() }
    }

    /// Rank of `A + λB` over ℚ(λ), the maximum over all λ (always even).
    ///
    /// A nonzero minor of order `r` has at most `r` roots, so the maximum
    /// over `n + 1` distinct values of λ is the generic rank.
    pub fn rank(&self) -> usize {
        let n = self.dim();
        let full = n - n % 2;
        let mut best = 0;
        for v in 0..=n as i64 {
            let lambda = Rational::from_integer(BigInt::from(v));
            best = best.max(rank(&self.a.add(&self.b.scale(&lambda))));
            if best == full {
                break;
            }
        }
        best
    }

    /// Monic gcd of the Pfaffians of all principal minors of `A + λB` whose
    /// order equals the pencil rank.
    pub fn characteristic_polynomial(&self) -> Result<Polynomial> {
        let r = self.rank();
        if r == 0 {
            return Err(Error::DegeneratePencil);
        }
        let sym = self.symbolic();
        let mut acc = Polynomial::zero();
        let mut done = false;
        for_each_subset(self.dim(), r, &mut |idx| {
            if done {
                return;
            }
            let pf = polynomial_pfaffian(&sym.principal(idx)).expect("principal minors of a skew matrix are skew");
            if !pf.is_zero() {
                acc = poly_gcd(&acc, &pf);
                done = acc.is_constant();
            }
        });
        Ok(acc.with_var('λ'))
    }

    /// Eigenvalues `μ` (rank of `A − μB` drops), including ∞ when `rk B < rk P`.
    pub fn eigenvalues(&self) -> Vec<PencilEigenvalue> {
        let r = self.rank();
        if r == 0 {
            return Vec::new();
        }
        let charpoly = self.characteristic_polynomial().expect("rank is positive");
        let mut out: Vec<PencilEigenvalue> = Vec::new();
        if !charpoly.is_constant() {
            for (q, mult) in irreducible_factors(&charpoly).factors {
                let value = Eigenvalue::from_charpoly_factor(&q);
                let Eigenvalue::Finite(minpoly) = &value else { unreachable!() };
                let approximations = numeric_roots(minpoly);
                out.push(PencilEigenvalue { value, multiplicity: mult, approximations });
            }
        }
        if rank(&self.b) < r {
            // multiplicity of ∞ is that of the root 0 of the swapped pencil
            let swapped = self.swapped().characteristic_polynomial().expect("rank is positive");
            let mut m = 0;
            let mut rest = swapped;
            let mu = Polynomial::variable('λ');
            while !rest.is_zero() && rest.coeff(0).is_zero() {
                rest = rest.div_rem(&mu).0;
                m += 1;
            }
            out.push(PencilEigenvalue { value: Eigenvalue::Infinite, multiplicity: m, approximations: Vec::new() });
        }
        out.sort_by(|a, b| a.value.cmp(&b.value));
        out
    }

    /// Whether `A + λ₀B` attains the pencil rank.
    pub fn is_regular_value(&self, lambda: &Lambda) -> bool {
        rank(&self.form_at(lambda)) == self.rank()
    }

    /// A regular rational value, searching 0, 1, −1, 2, −2, …
    pub fn some_regular_value(&self) -> Rational {
        let r = self.rank();
        (0..)
            .map(|k: i64| if k % 2 == 0 { -(k / 2) } else { k / 2 + 1 })
            .map(|v| Rational::from_integer(v.into()))
            .find(|v| rank(&self.form_at(&Lambda::Finite(v.clone()))) == r)
            .expect("only finitely many singular values")
    }

    /// The core subspace: sum of `Ker(A + λB)` over regular λ.
    ///
    /// Computed as the rational span of the λ-coefficients of a polynomial
    /// basis of the kernel over ℚ(λ).
    pub fn core_subspace(&self) -> Subspace {
        let n = self.dim();
        let lifted = self.symbolic().map(|p| RationalFunction::from_polynomial(p.clone()));
        let kernel = kernel_basis(&lifted);
        let mut rows = Vec::new();
        for i in 0..kernel.rows() {
            let v = kernel.row(i);
            let lcm = v.iter().fold(Polynomial::one(), |acc, f| {
                let g = poly_gcd(&acc, f.denom());
                (&acc * f.denom()).div_rem(&g).0
            });
            let polys: Vec<Polynomial> =
                v.iter().map(|f| (f.numer() * &lcm).div_rem(f.denom()).0).collect();
            let top = polys.iter().filter_map(|p| p.degree()).max().unwrap_or(0);
            for d in 0..=top {
                rows.push(polys.iter().map(|p| p.coeff(d)).collect());
            }
        }
        Subspace::new(n, rows)
    }

    pub fn jk_invariants(&self) -> Result<JkInvariants> {
        jk::jk_invariants(self)
    }

    /// `Σ_{regular λ} Ker(A + λB)` sampled at `count` regular integer values;
    /// an evaluation-based counterpart of [`Self::core_subspace`].
    pub fn sampled_core(&self, count: usize) -> Subspace {
        let r = self.rank();
        let n = self.dim();
        let mut acc = Subspace::zero(n);
        let mut found = 0;
        let mut v = 0i64;
        while found < count {
            let lambda = Lambda::Finite(Rational::from_integer(BigInt::from(v)));
            let form = self.form_at(&lambda);
            if rank(&form) == r {
                acc = acc.sum(&Subspace::from_matrix(&kernel_basis(&form)));
                found += 1;
            }
            v = if v <= 0 { 1 - v } else { -v };
        }
        acc
    }
}

/// Calls `f` with every increasing index set of size `k` drawn from `0..n`.
pub(crate) fn for_each_subset(n: usize, k: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, f);
            cur.pop();
        }
    }
    rec(0, n, k, &mut Vec::with_capacity(k), f);
}
