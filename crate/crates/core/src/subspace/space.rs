//! Linear subspaces of ℚⁿ in canonical (reduced row echelon) form.

use crate::algebra::{kernel_basis, rref, solve_left, Matrix, Rational};
use num::{One, Zero};
use std::fmt;

/// A subspace of ℚⁿ stored by its reduced row echelon basis, so equality
/// of subspaces is equality of values.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix<Rational>,
}

impl Subspace {
    /// Span of the given vectors (each of length `ambient`).
    pub fn new(ambient: usize, rows: Vec<Vec<Rational>>) -> Self {
        assert!(rows.iter().all(|r| r.len() == ambient), "vector length differs from ambient dimension");
        Self::from_matrix(&Matrix::from_rows(rows, ambient))
    }

    /// Span of the rows of `m`.
    pub fn from_matrix(m: &Matrix<Rational>) -> Self {
        let (basis, _) = rref(m);
        Subspace { ambient: m.cols(), basis }
    }

    pub fn zero(n: usize) -> Self {
        Subspace { ambient: n, basis: Matrix::zeros(0, n) }
    }

    pub fn full(n: usize) -> Self {
        Subspace { ambient: n, basis: Matrix::identity(n) }
    }

    /// Span of the standard basis vectors with the given (0-based) indices.
    pub fn coordinate(n: usize, indices: &[usize]) -> Self {
        let rows = indices
            .iter()
            .map(|&i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
            .collect();
        Self::new(n, rows)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    /// Basis vectors as rows, in reduced row echelon form.
    pub fn basis(&self) -> &Matrix<Rational> {
        &self.basis
    }

    pub fn vectors(&self) -> Vec<Vec<Rational>> {
        self.basis.row_vecs()
    }

    pub fn contains_vector(&self, v: &[Rational]) -> bool {
        v.iter().all(|x| x.is_zero()) || solve_left(&self.basis, v).is_some()
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &Subspace) -> bool {
        other.vectors().iter().all(|v| self.contains_vector(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        Self::from_matrix(&self.basis.vstack(&other.basis))
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        // x = Σ a_i u_i = Σ b_j w_j  ⇔  (a, b) ∈ ker [Uᵀ | −Wᵀ]
        let (k, l, n) = (self.dim(), other.dim(), self.ambient);
        if k == 0 || l == 0 {
            return Subspace::zero(n);
        }
        let m = Matrix::from_fn(n, k + l, |i, j| {
            if j < k {
                self.basis[(j, i)].clone()
            } else {
                -other.basis[(j - k, i)].clone()
            }
        });
        let ker = kernel_basis(&m);
        let rows = (0..ker.rows())
            .map(|r| {
                (0..n)
                    .map(|i| (0..k).fold(Rational::zero(), |acc, j| acc + &ker[(r, j)] * &self.basis[(j, i)]))
                    .collect()
            })
            .collect();
        Self::new(n, rows)
    }

    /// Orthogonal complement with respect to a bilinear form: `{x : xᵀ Ω u = 0 ∀u ∈ self}`.
    pub fn form_complement(&self, form: &Matrix<Rational>) -> Subspace {
        if self.dim() == 0 {
            return Subspace::full(self.ambient);
        }
        // rows of U·Ω are the linear functionals x ↦ uᵀΩx; for skew Ω the
        // complement is symmetric, and for general Ω this is the right one
        let functionals = self.basis.mul(form);
        Subspace::from_matrix(&kernel_basis(&functionals))
    }

    /// Image `{M v : v ∈ self}` under a linear map acting on column vectors.
    pub fn image(&self, m: &Matrix<Rational>) -> Subspace {
        let rows = self.vectors().iter().map(|v| m.mul_vec(v)).collect();
        Self::new(m.rows(), rows)
    }

    /// Whether `M(self) ⊆ self`.
    pub fn is_invariant_under(&self, m: &Matrix<Rational>) -> bool {
        self.vectors().iter().all(|v| self.contains_vector(&m.mul_vec(v)))
    }

    /// Whether the restriction of the form to the subspace vanishes.
    pub fn is_isotropic_for(&self, form: &Matrix<Rational>) -> bool {
        let u = &self.basis;
        u.mul(form).mul(&u.transpose()).is_zero()
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "span{{")?;
        for (k, v) in self.vectors().iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "(")?;
            for (i, x) in v.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, ")")?;
        }
        write!(f, "}} ⊂ Q^{}", self.ambient)
    }
}
