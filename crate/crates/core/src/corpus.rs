//! Bundled examples: canonical constant pencils, polynomial chart pencils,
//! and a few deliberately broken inputs.

use crate::algebra::{rat, Polynomial, Rational};
use crate::charts::{ChartPencil, FunctionFamily, FunctionTag, MultiPoly, PolyBivector};
use crate::pencil::{complex_block, infinite_block, jordan_block, kronecker_block, Lambda, SkewPencil};

/// Whether an entry is a constant pencil or a genuinely polynomial chart.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EntryKind {
    Constant,
    Chart,
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub notes: &'static str,
    pub kind: EntryKind,
    pub chart: ChartPencil,
    /// `false` for the deliberate failures (Jacobi or compatibility broken).
    pub valid: bool,
}

impl CorpusEntry {
    pub fn constant_pencil(&self) -> Option<SkewPencil> {
        (self.kind == EntryKind::Constant).then(|| {
            let zero = vec![Rational::from_integer(0.into()); self.chart.dim()];
            self.chart.evaluate_at(&zero)
        })
    }
}

fn chart(a: PolyBivector, b: PolyBivector) -> ChartPencil {
    let mut c = ChartPencil::new(a, b).expect("matching dimensions");
    c.verify();
    c
}

fn parse(n: usize, entries: &[(usize, usize, &str)]) -> PolyBivector {
    PolyBivector::parse(n, entries).expect("corpus bivector parses")
}

pub fn constant_chart(p: &SkewPencil) -> ChartPencil {
    chart(PolyBivector::constant(p.a()), PolyBivector::constant(p.b()))
}

/// `J₄(μ)`: eigenvalue `−μ`, i.e. `M_A = [[−μ, 1], [0, −μ]]`.
pub fn j4(mu: i64) -> SkewPencil {
    jordan_block(&Polynomial::from_ints(&[mu, 1], 't'), 2)
}

pub fn k(size: usize) -> SkewPencil {
    kronecker_block(size / 2)
}

pub fn c4(alpha: i64, beta: i64) -> SkewPencil {
    complex_block(&rat(alpha, 1), &rat(beta, 1), 1)
}

/// 8×8 real Jordan block for `α ± iβ = 1 ± 2i` with a nonzero nilpotent part.
pub fn complex_jordan_8() -> SkewPencil {
    complex_block(&rat(1, 1), &rat(2, 1), 2)
}

/// so(3) Lie–Poisson bivector `A¹² = x₃, A¹³ = −x₂, A²³ = x₁`.
pub fn so3() -> PolyBivector {
    parse(3, &[(1, 2, "x3"), (1, 3, "-x2"), (2, 3, "x1")])
}

/// so(3) with the frozen-argument bracket `B¹² = 1`.
pub fn so3_frozen() -> ChartPencil {
    chart(so3(), parse(3, &[(1, 2, "1")]))
}

/// Coordinates `(p, q, z)`: `A = z ∂p∧∂q`, `B = ∂p∧∂q`; `z` is a common Casimir.
pub fn pqz() -> ChartPencil {
    chart(parse(3, &[(1, 2, "x3")]), parse(3, &[(1, 2, "1")]))
}

/// Two Casimir coordinates: `A = (x₃² + x₄) ∂₁∧∂₂`, `B = (1 + x₃²) ∂₁∧∂₂`.
pub fn two_casimir() -> ChartPencil {
    chart(parse(4, &[(1, 2, "x3^2 + x4")]), parse(4, &[(1, 2, "x3^2 + 1")]))
}

/// Common Casimir `z = x₅ − x₃³/3` of [`warped`].
pub fn warped_casimir() -> MultiPoly {
    MultiPoly::parse(5, "x5 - 1/3*x3^3").expect("parses")
}

/// `A = z ∂p₁∧∂q₁ + (z² + 1) ∂p₂∧∂q₂`, `B = ∂p₁∧∂q₁ + ∂p₂∧∂q₂` written in
/// coordinates `x = (p₁, q₁, p₂, q₂, z + p₂³/3)`. Eigenvalues `z` and `z² + 1`.
pub fn warped() -> ChartPencil {
    let z = warped_casimir();
    let n = 5;
    let one = MultiPoly::one(n);
    let x3sq = MultiPoly::parse(n, "x3^2").expect("parses");
    let z2p1 = &(&z * &z) + &one;
    let mut a = PolyBivector::zero(n);
    a.set(0, 1, z.clone());
    a.set(2, 3, z2p1.clone());
    a.set(4, 3, &x3sq * &z2p1);
    let mut b = PolyBivector::zero(n);
    b.set(0, 1, one);
    b.set(2, 3, MultiPoly::one(n));
    b.set(4, 3, x3sq);
    chart(a, b)
}

/// `A = [[0, M], [−Mᵀ, 0]]`, `M = [[a, −b], [b, a]]` with `a + ib = F(x₁ + ix₂)`,
/// over the standard symplectic `B`; eigenvalues `F(w)` and its conjugate.
fn complex_chart(a: &str, b: &str) -> ChartPencil {
    let n = 4;
    let pa = MultiPoly::parse(n, a).expect("parses");
    let pb = MultiPoly::parse(n, b).expect("parses");
    let mut bi = PolyBivector::zero(n);
    bi.set(0, 2, pa.clone());
    bi.set(0, 3, -&pb);
    bi.set(1, 2, pb);
    bi.set(1, 3, pa);
    chart(bi, parse(4, &[(1, 3, "1"), (2, 4, "1")]))
}

/// `F(w) = w`.
pub fn linear_complex() -> ChartPencil {
    complex_chart("x1", "x2")
}

/// `F(w) = w + w³/3`.
pub fn holomorphic() -> ChartPencil {
    complex_chart("x1 + 1/3*x1^3 - x1*x2^2", "x2 + x1^2*x2 - 1/3*x2^3")
}

/// so(3) with `B¹² = x₁`: both Poisson, not compatible.
pub fn incompatible_pair() -> ChartPencil {
    chart(so3(), parse(3, &[(1, 2, "x1")]))
}

/// `P¹² = x₃, P³⁴ = x₁` violates the Jacobi identity.
pub fn jacobi_violation() -> ChartPencil {
    chart(parse(4, &[(1, 2, "x3"), (3, 4, "x1")]), PolyBivector::zero(4))
}

/// Euler top: `H₀ = ½(x₁² + 2x₂² + 3x₃²)` with the Lie–Poisson bracket.
pub fn euler_top_hamiltonian() -> MultiPoly {
    MultiPoly::parse(3, "1/2*x1^2 + x2^2 + 3/2*x3^2").expect("parses")
}

/// `{|x|², H₀}` for the Euler top.
pub fn euler_top_integrals() -> Vec<MultiPoly> {
    vec![MultiPoly::parse(3, "x1^2 + x2^2 + x3^2").expect("parses"), euler_top_hamiltonian()]
}

pub fn euler_top_start() -> Vec<f64> {
    vec![1.0, 0.5, 1.0 / 3.0]
}

/// Symmetric top on so(3)/frozen: `H₀ = ½(x₁² + x₂² + 2x₃²)` and
/// `H_∞ = −½x₃(x₁² + x₂²)` generate the same field.
pub fn symmetric_top_hamiltonians() -> Vec<(Lambda, MultiPoly)> {
    vec![
        (Lambda::int(0), MultiPoly::parse(3, "1/2*x1^2 + 1/2*x2^2 + x3^2").expect("parses")),
        (Lambda::Infinity, MultiPoly::parse(3, "-1/2*x1^2*x3 - 1/2*x2^2*x3").expect("parses")),
    ]
}

/// Standard integrals of so(3)/frozen: the Casimir of `A` and of `B`.
pub fn so3_frozen_family() -> FunctionFamily {
    FunctionFamily::new(vec![
        (MultiPoly::parse(3, "x1^2 + x2^2 + x3^2").expect("parses"), FunctionTag::CasimirAt(Lambda::int(0))),
        (MultiPoly::var(3, 2), FunctionTag::CasimirAt(Lambda::Infinity)),
    ])
}

/// Every bundled example.
pub fn corpus() -> Vec<CorpusEntry> {
    let constant = |name, notes, p: SkewPencil| CorpusEntry {
        name,
        notes,
        kind: EntryKind::Constant,
        chart: constant_chart(&p),
        valid: true,
    };
    let polynomial = |name, notes, chart: ChartPencil, valid| CorpusEntry { name, notes, kind: EntryKind::Chart, chart, valid };
    vec![
        constant("K1", "1×1 Kronecker block (zero form)", k(1)),
        constant("K3", "3×3 Kronecker block", k(3)),
        constant("K5", "5×5 Kronecker block", k(5)),
        constant("J4(3)", "4×4 Jordan block, eigenvalue −3", j4(3)),
        constant("J4(5)", "4×4 Jordan block, eigenvalue −5", j4(5)),
        constant("C4(1,2)", "complex pair 1 ± 2i", c4(1, 2)),
        constant("C8(1,2)", "8×8 real Jordan block for 1 ± 2i with nilpotent part", complex_jordan_8()),
        constant("Jinf(2)", "4×4 Jordan block at infinity", infinite_block(2)),
        constant("J4(3)+K3", "direct sum, 7×7", j4(3).direct_sum(&k(3))),
        constant("J4(3)+J4(5)", "two eigenvalues, 8×8", j4(3).direct_sum(&j4(5))),
        constant("J4(3)+J4(5)+K3", "two eigenvalues and a Kronecker block, 11×11", j4(3).direct_sum(&j4(5)).direct_sum(&k(3))),
        polynomial("so3-frozen", "so(3) Lie–Poisson with B¹² = 1; Euler-top fixture", so3_frozen(), true),
        polynomial("pqz", "A = z ∂p∧∂q, B = ∂p∧∂q; common Casimir z", pqz(), true),
        polynomial("two-casimir", "A = (x₃² + x₄) ∂₁∧∂₂, B = (1 + x₃²) ∂₁∧∂₂", two_casimir(), true),
        polynomial("warped", "eigenvalues z, z² + 1 in warped coordinates; common Casimir x₅ − x₃³", warped(), true),
        polynomial("linear-complex", "eigenvalues x₁ ± i x₂", linear_complex(), true),
        polynomial("holomorphic", "eigenvalues F(x₁ + i x₂), F(w) = w + w³/3", holomorphic(), true),
        polynomial("incompatible", "so(3) with B¹² = x₁: not compatible", incompatible_pair(), false),
        polynomial("non-jacobi", "P¹² = x₃, P³⁴ = x₁: Jacobi fails", jacobi_violation(), false),
    ]
}

pub fn find(name: &str) -> Option<CorpusEntry> {
    corpus().into_iter().find(|e| e.name == name)
}
