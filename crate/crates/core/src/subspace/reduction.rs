//! Linear bi-Poisson reduction to `U^⊥ / U`.

use super::{is_bi_isotropic, ortho_complement, Subspace};
use crate::algebra::{solve_left, Matrix, Rational};
use crate::error::{Error, Result};
use crate::pencil::{Eigenvalue, SkewPencil};

/// Quotient pencil on `U^⊥ / U` with the data to move vectors between the
/// quotient and the original space.
#[derive(Clone, Debug, PartialEq)]
pub struct Reduction {
    pub pencil: SkewPencil,
    /// Rows `w_i` completing a basis of `U` to one of `U^⊥`; the quotient
    /// coordinates of `Σ cᵢ wᵢ + U` are `c`.
    pub section: Matrix<Rational>,
    pub kernel: Subspace,
    pub perp: Subspace,
}

impl Reduction {
    /// Quotient coordinates of `v ∈ U^⊥`, or `None` if `v ∉ U^⊥`.
    pub fn project(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        let full = self.kernel.basis().vstack(&self.section);
        let c = solve_left(&full, v).or_else(|| v.iter().all(num::Zero::is_zero).then(|| vec![num::zero(); full.rows()]))?;
        Some(c[self.kernel.dim()..].to_vec())
    }

    /// The representative `Σ cᵢ wᵢ` of a quotient vector.
    pub fn lift(&self, c: &[Rational]) -> Vec<Rational> {
        self.section.transpose().mul_vec(c)
    }

    /// Image of `(L ∩ U^⊥) + U` in the quotient.
    pub fn reduce(&self, l: &Subspace) -> Subspace {
        let m = self.section.rows();
        let inter = l.intersection(&self.perp);
        let rows = inter.vectors().iter().map(|v| self.project(v).expect("vector lies in U^⊥")).collect();
        Subspace::new(m, rows)
    }

    /// Preimage in `U^⊥` of a quotient subspace.
    pub fn lift_subspace(&self, l: &Subspace) -> Subspace {
        let rows = l.vectors().iter().map(|c| self.lift(c)).collect();
        Subspace::new(self.kernel.ambient(), rows).sum(&self.kernel)
    }
}

/// Reduces the pencil by an admissible bi-isotropic subspace.
pub fn reduce_pencil(p: &SkewPencil, u: &Subspace) -> Result<Reduction> {
    if !is_bi_isotropic(p, u) {
        return Err(Error::NotBiIsotropic);
    }
    let comp = ortho_complement(p, u);
    if !comp.lambda_independent {
        return Err(Error::NotAdmissible);
    }
    let perp = comp.subspace;
    let n = p.dim();
    let mut span = u.clone();
    let mut section = Vec::new();
    for v in perp.vectors() {
        if !span.contains_vector(&v) {
            span = span.sum(&Subspace::new(n, vec![v.clone()]));
            section.push(v);
        }
    }
    let section = Matrix::from_rows(section, n);
    let st = section.transpose();
    let pencil = SkewPencil::new(section.mul(p.a()).mul(&st), section.mul(p.b()).mul(&st))
        .expect("restricted forms are skew");
    Ok(Reduction { pencil, section, kernel: u.clone(), perp })
}

/// `((L ∩ U^⊥) + U) / U` in the quotient coordinates of [`reduce_pencil`].
pub fn reduce_subspace(p: &SkewPencil, u: &Subspace, l: &Subspace) -> Result<Subspace> {
    Ok(reduce_pencil(p, u)?.reduce(l))
}

/// Spectra of a pencil and of its reduction by a subspace containing the core.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumReport {
    pub original: Vec<Eigenvalue>,
    pub reduced: Vec<Eigenvalue>,
    pub contained: bool,
    /// Corank of the reduced pencil over ℚ(λ).
    pub reduced_corank: usize,
}

impl SpectrumReport {
    pub fn passed(&self) -> bool {
        self.contained && self.reduced_corank == 0
    }
}

pub fn spectrum_containment(p: &SkewPencil, u: &Subspace) -> Result<SpectrumReport> {
    if !u.contains(&p.core_subspace()) {
        return Err(Error::CoreNotContained);
    }
    let red = reduce_pencil(p, u)?;
    let values = |q: &SkewPencil| q.eigenvalues().into_iter().map(|e| e.value).collect::<Vec<_>>();
    let original = values(p);
    let reduced = values(&red.pencil);
    let contained = reduced.iter().all(|e| original.contains(e));
    let reduced_corank = red.pencil.dim() - red.pencil.rank();
    Ok(SpectrumReport { original, reduced, contained, reduced_corank })
}
