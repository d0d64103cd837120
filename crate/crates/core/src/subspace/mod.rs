//! Subspace calculus for a fixed pencil: skew-orthogonal complements,
//! bi-isotropic / admissible / bi-Lagrangian subspaces, bi-Lagrangian
//! construction via the recursion operator, and linear bi-Poisson reduction.

mod recursion;
mod reduction;
mod space;

pub use recursion::{eval_at_matrix, minimal_polynomial, RecursionOperator};
pub use reduction::{reduce_pencil, reduce_subspace, spectrum_containment, Reduction, SpectrumReport};
pub use space::Subspace;

use crate::algebra::{irreducible_factors, kernel_basis, rref, Matrix, Polynomial, Rational, RationalFunction};
use crate::error::{Error, Result};
use crate::pencil::{Lambda, SkewPencil};
use num::{BigInt, One, Signed};

/// Skew-orthogonal complement of a subspace with respect to the pencil.
#[derive(Clone, Debug, PartialEq)]
pub struct Complement {
    /// The generic complement when it is λ-independent, otherwise the
    /// complement at the regular value `sample`.
    pub subspace: Subspace,
    pub lambda_independent: bool,
    pub sample: Option<Rational>,
    /// The complement with respect to `B` differs from the generic one.
    pub differs_at_infinity: bool,
}

/// `{v : (A + λB)(u, v) = 0 ∀u ∈ U}` over ℚ(λ).
pub fn ortho_complement(p: &SkewPencil, u: &Subspace) -> Complement {
    let n = p.dim();
    let sym = p.symbolic().map(|e| RationalFunction::from_polynomial(e.clone()));
    let ub = u.basis().map(|x| RationalFunction::constant(x.clone()));
    let functionals = ub.mul(&sym);
    let (canon, _) = rref(&kernel_basis(&functionals));
    let constant: Option<Vec<Vec<Rational>>> = (0..canon.rows())
        .map(|i| canon.row(i).iter().map(|f| f.as_constant()).collect::<Option<Vec<_>>>())
        .collect();
    let at_infinity = u.form_complement(p.b());
    match constant {
        Some(rows) => {
            let subspace = Subspace::new(n, rows);
            let differs_at_infinity = subspace != at_infinity;
            Complement { subspace, lambda_independent: true, sample: None, differs_at_infinity }
        }
        None => {
            let l = p.some_regular_value();
            let subspace = u.form_complement(&p.form_at(&Lambda::Finite(l.clone())));
            let differs_at_infinity = subspace != at_infinity;
            Complement { subspace, lambda_independent: false, sample: Some(l), differs_at_infinity }
        }
    }
}

pub fn is_bi_isotropic(p: &SkewPencil, u: &Subspace) -> bool {
    u.is_isotropic_for(p.a()) && u.is_isotropic_for(p.b())
}

pub fn is_admissible(p: &SkewPencil, u: &Subspace) -> bool {
    ortho_complement(p, u).lambda_independent
}

pub fn is_bi_lagrangian(p: &SkewPencil, l: &Subspace) -> bool {
    l.dim() == p.dim() - p.rank() / 2 && is_bi_isotropic(p, l) && is_admissible(p, l)
}

/// `span{w, Pw, P²w, …}`.
pub fn cyclic_span(p: &Matrix<Rational>, w: &[Rational]) -> Subspace {
    let n = p.rows();
    let mut span = Subspace::zero(n);
    let mut v = w.to_vec();
    while !span.contains_vector(&v) {
        span = span.sum(&Subspace::new(n, vec![v.clone()]));
        v = p.mul_vec(&v);
    }
    span
}

/// Extends a bi-isotropic, `P`-invariant seed to a bi-Lagrangian subspace.
///
/// Each step adjoins the cyclic span of one vector `w ∈ L^{⊥B}` with
/// `q(P)w ∈ L`, taking irreducible factors `q` of the minimal polynomial in
/// ascending order and the first echelon basis vector that is new.
pub fn build_bi_lagrangian(p: &SkewPencil, seed: &Subspace) -> Result<Subspace> {
    let rec = RecursionOperator::new(p)?;
    if !is_bi_isotropic(p, seed) {
        return Err(Error::NotBiIsotropic);
    }
    if !seed.is_invariant_under(rec.matrix()) {
        return Err(Error::NotInvariant);
    }
    let n = p.dim();
    let mut factors: Vec<Polynomial> =
        irreducible_factors(rec.minimal_polynomial()).factors.into_iter().map(|(q, _)| q).collect();
    factors.sort_by_key(|q| q.degree());
    let q_ops: Vec<Matrix<Rational>> = factors.iter().map(|q| eval_at_matrix(q, rec.matrix())).collect();
    let mut l = seed.clone();
    while 2 * l.dim() < n {
        let w_space = l.form_complement(p.b());
        let mut extended = false;
        for q_op in &q_ops {
            // X_q = {x ∈ W : q(P)x ∈ L}
            let candidates = preimage_within(&w_space, q_op, &l);
            if let Some(w) = candidates.vectors().into_iter().find(|v| !l.contains_vector(v)) {
                l = l.sum(&cyclic_span(rec.matrix(), &w));
                extended = true;
                break;
            }
        }
        if !extended {
            return Err(Error::Consistency("bi-isotropic seed could not be extended".into()));
        }
    }
    Ok(l)
}

/// `{x ∈ W : M x ∈ L}`.
fn preimage_within(w: &Subspace, m: &Matrix<Rational>, l: &Subspace) -> Subspace {
    let n = w.ambient();
    if w.dim() == 0 {
        return Subspace::zero(n);
    }
    // x = Σ a_i w_i, need M x ∈ L: the images M w_i modulo L must cancel
    let quotient = l.form_complement(&Matrix::identity(n)); // L^⊥ (standard dot product)
    let images = w.basis().mul(&m.transpose()); // rows: (M w_i)ᵀ
    let pairing = images.mul(&quotient.basis().transpose()); // k × (n − dim L)
    let coeffs = kernel_basis(&pairing.transpose());
    Subspace::from_matrix(&coeffs.mul(w.basis()))
}

/// The pencil `(B·N, B)` where `N` is the nilpotent part of `P = B⁻¹A`.
pub fn nilpotent_companion(p: &SkewPencil) -> Result<SkewPencil> {
    let rec = RecursionOperator::new(p)?;
    let a = p.b().mul(rec.nilpotent());
    if !a.is_skew() {
        return Err(Error::Consistency("B·N is not skew-symmetric".into()));
    }
    SkewPencil::new(a, p.b().clone())
}

/// The pencil restricted to a subspace, in the coordinates of its echelon basis.
pub fn restrict(p: &SkewPencil, v: &Subspace) -> SkewPencil {
    let basis = v.basis();
    let bt = basis.transpose();
    SkewPencil::new(basis.mul(p.a()).mul(&bt), basis.mul(p.b()).mul(&bt)).expect("restriction of skew forms")
}

/// Primary decomposition of the space under `P`: one `P`-invariant summand
/// per irreducible factor of the minimal polynomial, with the restricted pencil.
pub fn eigen_splitting(p: &SkewPencil) -> Result<Vec<(Subspace, SkewPencil)>> {
    let rec = RecursionOperator::new(p)?;
    let mut out = Vec::new();
    for (q, e) in irreducible_factors(rec.minimal_polynomial()).factors {
        let op = eval_at_matrix(&q.pow(e), rec.matrix());
        let summand = Subspace::from_matrix(&kernel_basis(&op));
        let restricted = restrict(p, &summand);
        out.push((summand, restricted));
    }
    Ok(out)
}

/// Complex structure `J = (S − α)/β` for a pencil whose semisimple part has
/// the single conjugate pair `α ± iβ`, and the residual form `Â = A − αB − βBJ`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexStructure {
    pub alpha: Rational,
    pub beta: Rational,
    pub j: Matrix<Rational>,
    pub a_hat: Matrix<Rational>,
}

fn rational_sqrt(v: &Rational) -> Option<Rational> {
    if v.is_negative() {
        return None;
    }
    let root = |x: &BigInt| {
        let r = x.sqrt();
        (&r * &r == *x).then_some(r)
    };
    Some(Rational::new(root(v.numer())?, root(v.denom())?))
}

pub fn complex_structure(p: &SkewPencil) -> Result<ComplexStructure> {
    let rec = RecursionOperator::new(p)?;
    let s = rec.minimal_polynomial().squarefree_part();
    let factors = irreducible_factors(&s).factors;
    if factors.len() != 1 || s.degree() != Some(2) {
        return Err(Error::UnsupportedSpectrum(format!(
            "semisimple part must have a single conjugate pair, minimal polynomial is {s}"
        )));
    }
    // s = t² − 2αt + (α² + β²)
    let two = Rational::from_integer(2.into());
    let alpha = -s.coeff(1) / two;
    let beta_sq = s.coeff(0) - &alpha * &alpha;
    if !beta_sq.is_positive() {
        return Err(Error::UnsupportedSpectrum(format!("real eigenvalues, minimal polynomial {s}")));
    }
    let beta = rational_sqrt(&beta_sq).ok_or_else(|| {
        Error::UnsupportedSpectrum(format!("imaginary part sqrt({beta_sq}) is irrational"))
    })?;
    let n = p.dim();
    let j = rec.semisimple().sub(&Matrix::identity(n).scale(&alpha)).scale(&(Rational::one() / &beta));
    if j.mul(&j) != Matrix::identity(n).scale(&-Rational::one()) {
        return Err(Error::Consistency("J² ≠ −id".into()));
    }
    if j.mul(rec.matrix()) != rec.matrix().mul(&j) {
        return Err(Error::Consistency("J does not commute with P".into()));
    }
    let a_hat = p.a().sub(&p.b().scale(&alpha)).sub(&p.b().mul(&j).scale(&beta));
    if !a_hat.is_skew() {
        return Err(Error::Consistency("Â is not skew-symmetric".into()));
    }
    let mut power = rec.nilpotent().clone();
    for _ in 1..n {
        power = power.mul(rec.nilpotent());
    }
    if !power.is_zero() {
        return Err(Error::Consistency("recursion part of Â is not nilpotent".into()));
    }
    Ok(ComplexStructure { alpha, beta, j, a_hat })
}
