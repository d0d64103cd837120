//! Polynomial Poisson pencils on a coordinate chart.
//!
//! Bivector entries are polynomials in `x1 … xn`. All identity checks are
//! symbolic and exact; pointwise operations evaluate at rational points and
//! hand the result to [`crate::pencil`]. Eigenvalue functions are handled
//! numerically in [`eigdiff`].

mod bivector;
mod casimirs;
pub mod eigdiff;
mod multipoly;

pub use bivector::{
    block_compatibility_check, compatibility_check, jacobi_check, BlockCompatibility, IdentityCheck, PolyBivector,
    Witness,
};
pub use casimirs::polynomial_casimirs;
pub use eigdiff::{eigenvalue_differential_check, eigenvalue_differential_convergence};
pub use multipoly::MultiPoly;

use crate::algebra::{rank, Matrix, Rational};
use crate::error::{Error, Result};
use crate::pencil::{Eigenvalue, JkInvariants, Lambda, SkewPencil};
use crate::subspace::Subspace;
use num::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// A pair of polynomial bivectors spanning the pencil `A + λB`, with flags
/// recording which symbolic checks have passed.
#[derive(Clone, Debug, PartialEq)]
pub struct ChartPencil {
    a: PolyBivector,
    b: PolyBivector,
    jacobi_verified: bool,
    compatibility_verified: bool,
}

/// Results of the three symbolic identities behind a Poisson pencil.
#[derive(Clone, Debug, PartialEq)]
pub struct PencilChecks {
    pub jacobi_a: IdentityCheck,
    pub jacobi_b: IdentityCheck,
    pub compatibility: IdentityCheck,
}

impl ChartPencil {
    /// Unchecked pencil; flags start cleared.
    pub fn new(a: PolyBivector, b: PolyBivector) -> Result<Self> {
        if a.dim() != b.dim() {
            return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
        }
        Ok(ChartPencil { a, b, jacobi_verified: false, compatibility_verified: false })
    }

    /// Runs the Jacobi and compatibility checks and sets the flags accordingly.
    pub fn verify(&mut self) -> PencilChecks {
        let checks = PencilChecks {
            jacobi_a: jacobi_check(&self.a),
            jacobi_b: jacobi_check(&self.b),
            compatibility: compatibility_check(&self.a, &self.b).expect("equal dimensions"),
        };
        self.jacobi_verified = checks.jacobi_a.holds && checks.jacobi_b.holds;
        self.compatibility_verified = self.jacobi_verified && checks.compatibility.holds;
        checks
    }

    pub fn a(&self) -> &PolyBivector {
        &self.a
    }

    pub fn b(&self) -> &PolyBivector {
        &self.b
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    pub fn jacobi_verified(&self) -> bool {
        self.jacobi_verified
    }

    pub fn compatibility_verified(&self) -> bool {
        self.compatibility_verified
    }

    /// The bivector `A + λB` (`B` at infinity).
    pub fn bivector_at(&self, lambda: &Lambda) -> PolyBivector {
        match lambda {
            Lambda::Finite(l) => self.a.add(&self.b.scale(l)),
            Lambda::Infinity => self.b.clone(),
        }
    }

    /// The constant pencil `(A(x), B(x))`.
    pub fn evaluate_at(&self, x: &[Rational]) -> SkewPencil {
        SkewPencil::new(self.a.matrix_at(x), self.b.matrix_at(x)).expect("bivectors evaluate to skew matrices")
    }

    /// `{f, g}_λ = dfᵀ (A + λB) dg`.
    pub fn bracket(&self, f: &MultiPoly, g: &MultiPoly, lambda: &Lambda) -> MultiPoly {
        self.bivector_at(lambda).bracket(f, g)
    }

    /// `({f, g}_A, {f, g}_B)`; the bracket is affine in λ.
    pub fn bracket_pair(&self, f: &MultiPoly, g: &MultiPoly) -> (MultiPoly, MultiPoly) {
        (self.a.bracket(f, g), self.b.bracket(f, g))
    }

    /// Whether `f` is a Casimir of both `A` and `B` as a polynomial identity.
    pub fn is_common_casimir(&self, f: &MultiPoly) -> bool {
        [&self.a, &self.b].iter().all(|p| p.apply_differential(f).iter().all(MultiPoly::is_zero))
    }

    /// `(A + f·B, B)` for a common Casimir `f`, re-verified.
    pub fn casimir_shift(&self, f: &MultiPoly) -> Result<ChartPencil> {
        if !self.is_common_casimir(f) {
            return Err(Error::NotCasimir(f.to_string()));
        }
        let mut out = ChartPencil::new(self.a.add(&self.b.mul_function(f)), self.b.clone())?;
        out.verify();
        Ok(out)
    }

    /// Maximum pointwise pencil rank over the given points.
    pub fn rank_over(&self, points: &[Vec<Rational>]) -> usize {
        points.par_iter().map(|x| self.evaluate_at(x).rank()).max().unwrap_or(0)
    }
}

/// Deterministic pseudo-random rational points with small numerators and
/// denominators.
pub fn sample_points(n: usize, count: usize, seed: u64) -> Vec<Vec<Rational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            (0..n)
                .map(|_| Rational::new(rng.random_range(-9i64..=9).into(), rng.random_range(1i64..=5).into()))
                .collect()
        })
        .collect()
}

/// One sample of a bundle scan.
#[derive(Clone, Debug, PartialEq)]
pub struct ScanEntry {
    pub point: Vec<Rational>,
    pub rank: usize,
    pub same_bundle: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanReport {
    pub base: Vec<Rational>,
    pub base_invariants: JkInvariants,
    pub entries: Vec<ScanEntry>,
}

impl ScanReport {
    /// Samples whose bundle differs from the base point.
    pub fn changes(&self) -> Vec<&ScanEntry> {
        self.entries.iter().filter(|e| !e.same_bundle).collect()
    }
}

/// Compares the bundle at `base` with the bundle at each sample.
pub fn jk_regular_scan(c: &ChartPencil, base: &[Rational], samples: &[Vec<Rational>]) -> Result<ScanReport> {
    let base_invariants = c.evaluate_at(base).jk_invariants()?;
    let signature = base_invariants.bundle_signature();
    let entries = samples
        .par_iter()
        .map(|x| {
            let p = c.evaluate_at(x);
            let inv = p.jk_invariants()?;
            Ok(ScanEntry { point: x.clone(), rank: p.rank(), same_bundle: inv.bundle_signature() == signature })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ScanReport { base: base.to_vec(), base_invariants, entries })
}

/// Spectra before and after a Casimir shift at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct ShiftReport {
    pub point: Vec<Rational>,
    pub shift: Rational,
    pub before: Vec<(Eigenvalue, usize)>,
    pub after: Vec<(Eigenvalue, usize)>,
    pub passed: bool,
}

fn spectrum(p: &SkewPencil) -> Vec<(Eigenvalue, usize)> {
    p.eigenvalues().into_iter().map(|e| (e.value, e.multiplicity)).collect()
}

/// Checks that every finite eigenvalue moves by `f(x)` under `A ↦ A + fB`.
pub fn verify_eigenvalue_shift(c: &ChartPencil, f: &MultiPoly, x: &[Rational]) -> Result<ShiftReport> {
    let shifted = c.casimir_shift(f)?;
    Ok(shift_report(c, &shifted, f, x))
}

/// [`verify_eigenvalue_shift`] at many points, evaluated concurrently.
pub fn verify_eigenvalue_shift_at(c: &ChartPencil, f: &MultiPoly, points: &[Vec<Rational>]) -> Result<Vec<ShiftReport>> {
    let shifted = c.casimir_shift(f)?;
    Ok(points.par_iter().map(|x| shift_report(c, &shifted, f, x)).collect())
}

fn shift_report(c: &ChartPencil, shifted: &ChartPencil, f: &MultiPoly, x: &[Rational]) -> ShiftReport {
    let shift = f.eval(x);
    let before = spectrum(&c.evaluate_at(x));
    let after = spectrum(&shifted.evaluate_at(x));
    let mut expected: Vec<(Eigenvalue, usize)> = before.iter().map(|(e, m)| (e.shifted(&shift), *m)).collect();
    expected.sort();
    let mut got = after.clone();
    got.sort();
    ShiftReport { point: x.to_vec(), shift, passed: expected == got, before, after }
}

/// Which bracket of the pencil a residual belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Form {
    A,
    B,
}

#[derive(Clone, Debug, PartialEq)]
pub struct InvolutionWitness {
    /// 0-based positions in the family.
    pub pair: (usize, usize),
    pub form: Form,
    pub residual: MultiPoly,
}

#[derive(Clone, Debug, PartialEq)]
pub struct InvolutionReport {
    pub holds: bool,
    pub witness: Option<InvolutionWitness>,
}

/// `{g_i, g_j}_A = {g_i, g_j}_B = 0` for all pairs.
pub fn bi_involution_check(c: &ChartPencil, functions: &[MultiPoly]) -> InvolutionReport {
    for i in 0..functions.len() {
        for j in i + 1..functions.len() {
            let (ra, rb) = c.bracket_pair(&functions[i], &functions[j]);
            for (form, residual) in [(Form::A, ra), (Form::B, rb)] {
                if !residual.is_zero() {
                    return InvolutionReport {
                        holds: false,
                        witness: Some(InvolutionWitness { pair: (i, j), form, residual }),
                    };
                }
            }
        }
    }
    InvolutionReport { holds: true, witness: None }
}

fn jacobian_at(functions: &[MultiPoly], x: &[Rational]) -> Matrix<Rational> {
    let n = x.len();
    Matrix::from_fn(functions.len(), n, |i, j| functions[i].derivative(j).eval(x))
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompletenessReport {
    /// `dim − ½ rk`.
    pub expected: usize,
    pub count: usize,
    pub pencil_rank: usize,
    pub rank_at_point: usize,
    pub sample_ranks: Vec<usize>,
    /// Whether `dG(x)` equals the target subspace, when one is given.
    pub target_match: Option<bool>,
}

/// Counts the family against `dim − ½ rk` and certifies functional
/// independence by exact Jacobian ranks at `x` and the sample points.
pub fn completeness_check(
    c: &ChartPencil,
    functions: &[MultiPoly],
    x: &[Rational],
    target: Option<&Subspace>,
    samples: &[Vec<Rational>],
) -> Result<CompletenessReport> {
    let n = c.dim();
    let mut points = vec![x.to_vec()];
    points.extend(samples.iter().cloned());
    let pencil_rank = c.rank_over(&points);
    let expected = n - pencil_rank / 2;
    if functions.len() != expected {
        return Err(Error::CountMismatch { expected, found: functions.len() });
    }
    let rank_at_point = rank(&jacobian_at(functions, x));
    let sample_ranks: Vec<usize> = samples.par_iter().map(|s| rank(&jacobian_at(functions, s))).collect();
    if rank_at_point < expected && sample_ranks.iter().all(|&r| r < expected) {
        return Err(Error::Dependent);
    }
    let target_match = target.map(|t| Subspace::from_matrix(&jacobian_at(functions, x)) == *t);
    Ok(CompletenessReport { expected, count: functions.len(), pencil_rank, rank_at_point, sample_ranks, target_match })
}

/// Role of a function in a family of candidate integrals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FunctionTag {
    CasimirAt(Lambda),
    EigenvalueRealPart,
    EigenvalueImagPart,
    HamiltonianAt(Lambda),
    Extension,
}

/// An ordered list of tagged polynomial functions.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct FunctionFamily {
    pub members: Vec<(MultiPoly, FunctionTag)>,
}

impl FunctionFamily {
    pub fn new(members: Vec<(MultiPoly, FunctionTag)>) -> Self {
        FunctionFamily { members }
    }

    pub fn functions(&self) -> Vec<MultiPoly> {
        self.members.iter().map(|(f, _)| f.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// One itemized check of [`standard_integrals_verify`].
#[derive(Clone, Debug, PartialEq)]
pub struct CheckItem {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct IntegralsReport {
    pub items: Vec<CheckItem>,
    /// Hamiltonians whose differential lies in the span of `dF` at a sample point.
    pub dependent_hamiltonians: Vec<usize>,
}

impl IntegralsReport {
    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.passed)
    }

    fn push(&mut self, name: String, passed: bool, detail: String) {
        self.items.push(CheckItem { name, passed, detail });
    }
}

/// The field `(A + αB)·dH`.
pub fn hamiltonian_field(c: &ChartPencil, alpha: &Lambda, h: &MultiPoly) -> Vec<MultiPoly> {
    c.bivector_at(alpha).apply_differential(h)
}

fn eigenvalue_parts(p: &SkewPencil) -> Vec<(Rational, Option<Rational>)> {
    // (real part, squared imaginary part) of each finite eigenvalue
    p.eigenvalues()
        .into_iter()
        .filter_map(|e| match e.value {
            Eigenvalue::Finite(q) => match q.degree() {
                Some(1) => Some((-q.coeff(0), None)),
                Some(2) => {
                    let alpha = -q.coeff(1) / Rational::from_integer(2.into());
                    let beta_sq = q.coeff(0) - &alpha * &alpha;
                    beta_sq.is_positive().then_some((alpha, Some(beta_sq)))
                }
                _ => None,
            },
            Eigenvalue::Infinite => None,
        })
        .collect()
}

/// Verifies a tagged family of standard integrals against a bi-Hamiltonian
/// field given by Hamiltonians at two or more values of λ.
pub fn standard_integrals_verify(
    c: &ChartPencil,
    family: &FunctionFamily,
    hamiltonians: &[(Lambda, MultiPoly)],
    samples: &[Vec<Rational>],
) -> IntegralsReport {
    let mut report = IntegralsReport::default();
    let generic_rank = c.rank_over(samples);
    for (k, (f, tag)) in family.members.iter().enumerate() {
        let label = format!("f{} = {}", k + 1, f);
        match tag {
            FunctionTag::CasimirAt(l) => {
                let casimir = c.bivector_at(l).apply_differential(f).iter().all(MultiPoly::is_zero);
                report.push(format!("{label}: Casimir at {l}"), casimir, String::new());
                let irregular: Vec<usize> = samples
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| rank(&c.evaluate_at(x).form_at(l)) < generic_rank)
                    .map(|(i, _)| i)
                    .collect();
                report.push(
                    format!("{label}: {l} regular at samples"),
                    irregular.is_empty(),
                    if irregular.is_empty() { String::new() } else { format!("singular at samples {irregular:?}") },
                );
            }
            FunctionTag::EigenvalueRealPart | FunctionTag::EigenvalueImagPart => {
                let real = matches!(tag, FunctionTag::EigenvalueRealPart);
                let bad: Vec<usize> = samples
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| {
                        let v = f.eval(x);
                        !eigenvalue_parts(&c.evaluate_at(x)).iter().any(|(alpha, beta_sq)| {
                            if real {
                                *alpha == v
                            } else {
                                beta_sq.as_ref().is_some_and(|b| *b == &v * &v)
                            }
                        })
                    })
                    .map(|(i, _)| i)
                    .collect();
                let what = if real { "real" } else { "imaginary" };
                report.push(
                    format!("{label}: {what} part of an eigenvalue"),
                    bad.is_empty(),
                    if bad.is_empty() { String::new() } else { format!("mismatch at samples {bad:?}") },
                );
            }
            FunctionTag::HamiltonianAt(_) | FunctionTag::Extension => {}
        }
    }
    let fields: Vec<Vec<MultiPoly>> = hamiltonians.iter().map(|(l, h)| hamiltonian_field(c, l, h)).collect();
    for i in 0..fields.len() {
        for j in i + 1..fields.len() {
            let diff = fields[i].iter().zip(&fields[j]).find(|(u, v)| u != v);
            report.push(
                format!("field from H at {} equals field from H at {}", hamiltonians[i].0, hamiltonians[j].0),
                diff.is_none(),
                diff.map(|(u, v)| format!("component residual {}", u - v)).unwrap_or_default(),
            );
        }
    }
    let functions = family.functions();
    let inv = bi_involution_check(c, &functions);
    report.push(
        "bi-involution of the family".into(),
        inv.holds,
        inv.witness
            .map(|w| format!("{{f{}, f{}}}_{:?} = {}", w.pair.0 + 1, w.pair.1 + 1, w.form, w.residual))
            .unwrap_or_default(),
    );
    if let Some(field) = fields.first() {
        for (k, f) in functions.iter().enumerate() {
            let lie = f.gradient().iter().zip(field).fold(MultiPoly::zero(c.dim()), |acc, (d, v)| &acc + &(d * v));
            report.push(
                format!("f{} is a first integral", k + 1),
                lie.is_zero(),
                if lie.is_zero() { String::new() } else { format!("v(f) = {lie}") },
            );
        }
    }
    if let Some(x) = samples.first() {
        let df = jacobian_at(&functions, x);
        let span = Subspace::from_matrix(&df);
        for (k, (_, h)) in hamiltonians.iter().enumerate() {
            let dh: Vec<Rational> = h.gradient().iter().map(|g| g.eval(x)).collect();
            if dh.iter().any(|v| !v.is_zero()) && span.contains_vector(&dh) {
                report.dependent_hamiltonians.push(k);
            }
        }
    }
    report
}

#[cfg(test)]
mod tests;
