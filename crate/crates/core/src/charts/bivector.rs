//! Polynomial bivectors and the symbolic Jacobi / compatibility identities.

use super::MultiPoly;
use crate::algebra::{Matrix, Rational};
use crate::error::{Error, Result};
use std::collections::BTreeMap;

/// Skew matrix of polynomial functions, stored by its entries `i < j`
/// (0-based internally).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyBivector {
    n: usize,
    entries: BTreeMap<(usize, usize), MultiPoly>,
}

impl PolyBivector {
    pub fn zero(n: usize) -> Self {
        PolyBivector { n, entries: BTreeMap::new() }
    }

    /// Constant bivector from a skew rational matrix.
    pub fn constant(m: &Matrix<Rational>) -> Self {
        let n = m.rows();
        let mut p = Self::zero(n);
        for i in 0..n {
            for j in i + 1..n {
                p.set(i, j, MultiPoly::constant(n, m[(i, j)].clone()));
            }
        }
        p
    }

    /// Builds from `(i, j, text)` with 1-based indices, `i ≠ j`.
    pub fn parse(n: usize, entries: &[(usize, usize, &str)]) -> Option<Self> {
        let mut p = Self::zero(n);
        for &(i, j, text) in entries {
            if i == 0 || j == 0 || i > n || j > n || i == j {
                return None;
            }
            p.set(i - 1, j - 1, MultiPoly::parse(n, text)?);
        }
        Some(p)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Sets `P^{ij}` (0-based) and implicitly `P^{ji} = −P^{ij}`.
    pub fn set(&mut self, i: usize, j: usize, value: MultiPoly) {
        assert!(i != j && i < self.n && j < self.n, "bivector index");
        let (key, value) = if i < j { ((i, j), value) } else { ((j, i), -&value) };
        if value.is_zero() {
            self.entries.remove(&key);
        } else {
            self.entries.insert(key, value);
        }
    }

    /// `P^{ij}` (0-based).
    pub fn get(&self, i: usize, j: usize) -> MultiPoly {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.entries.get(&(i, j)).cloned().unwrap_or_else(|| MultiPoly::zero(self.n)),
            std::cmp::Ordering::Greater => -&self.get(j, i),
            std::cmp::Ordering::Equal => MultiPoly::zero(self.n),
        }
    }

    /// Nonzero upper-triangular entries `(i, j, P^{ij})`, 0-based.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &MultiPoly)> {
        self.entries.iter().map(|(&(i, j), p)| (i, j, p))
    }

    pub fn is_affine(&self) -> bool {
        self.entries.values().all(MultiPoly::is_affine)
    }

    pub fn is_constant(&self) -> bool {
        self.entries.values().all(MultiPoly::is_constant)
    }

    pub fn add(&self, other: &PolyBivector) -> PolyBivector {
        let mut out = self.clone();
        for (i, j, p) in other.entries() {
            out.set(i, j, &out.get(i, j) + p);
        }
        out
    }

    /// `f · P`.
    pub fn mul_function(&self, f: &MultiPoly) -> PolyBivector {
        let mut out = Self::zero(self.n);
        for (i, j, p) in self.entries() {
            out.set(i, j, p * f);
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> PolyBivector {
        self.mul_function(&MultiPoly::constant(self.n, c.clone()))
    }

    pub fn matrix_at(&self, x: &[Rational]) -> Matrix<Rational> {
        let mut m = Matrix::zeros(self.n, self.n);
        for (i, j, p) in self.entries() {
            let v = p.eval(x);
            m[(j, i)] = -v.clone();
            m[(i, j)] = v;
        }
        m
    }

    pub fn matrix_f64(&self, x: &[f64]) -> nalgebra::DMatrix<f64> {
        let mut m = nalgebra::DMatrix::zeros(self.n, self.n);
        for (i, j, p) in self.entries() {
            let v = p.eval_f64(x);
            m[(i, j)] = v;
            m[(j, i)] = -v;
        }
        m
    }

    /// `P·df`, i.e. components `Σ_j P^{ij} ∂_j f` (the Hamiltonian field of `f`).
    pub fn apply_differential(&self, f: &MultiPoly) -> Vec<MultiPoly> {
        let grad = f.gradient();
        (0..self.n)
            .map(|i| {
                (0..self.n).fold(MultiPoly::zero(self.n), |acc, j| {
                    if grad[j].is_zero() {
                        acc
                    } else {
                        &acc + &(&self.get(i, j) * &grad[j])
                    }
                })
            })
            .collect()
    }

    /// `{f, g} = dfᵀ P dg`.
    pub fn bracket(&self, f: &MultiPoly, g: &MultiPoly) -> MultiPoly {
        let field = self.apply_differential(g);
        f.gradient().iter().zip(&field).fold(MultiPoly::zero(self.n), |acc, (df, v)| &acc + &(df * v))
    }
}

/// A failing cyclic sum: the sorted 1-based index triple and its residual.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub triple: [usize; 3],
    pub residual: MultiPoly,
}

/// Outcome of a symbolic identity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub holds: bool,
    /// First failing triple in lexicographic order.
    pub witness: Option<Witness>,
    /// Every failing triple.
    pub failures: Vec<Witness>,
}

impl IdentityCheck {
    fn from_failures(failures: Vec<Witness>) -> Self {
        IdentityCheck { holds: failures.is_empty(), witness: failures.first().cloned(), failures }
    }
}

/// `Σ_cyc(i,j,k) Σ_{s<limit} (A^{is} ∂_s B^{jk} + B^{is} ∂_s A^{jk})` over triples in `0..limit`.
fn cyclic_residual(a: &PolyBivector, b: &PolyBivector, limit: usize) -> IdentityCheck {
    let n = a.dim();
    let term = |i: usize, j: usize, k: usize| {
        let mut acc = MultiPoly::zero(n);
        let (bjk, ajk) = (b.get(j, k), a.get(j, k));
        for s in 0..limit {
            let (ais, bis) = (a.get(i, s), b.get(i, s));
            if !ais.is_zero() {
                acc = &acc + &(&ais * &bjk.derivative(s));
            }
            if !bis.is_zero() {
                acc = &acc + &(&bis * &ajk.derivative(s));
            }
        }
        acc
    };
    let mut failures = Vec::new();
    for i in 0..limit {
        for j in i + 1..limit {
            for k in j + 1..limit {
                let r = &(&term(i, j, k) + &term(j, k, i)) + &term(k, i, j);
                if !r.is_zero() {
                    failures.push(Witness { triple: [i + 1, j + 1, k + 1], residual: r });
                }
            }
        }
    }
    IdentityCheck::from_failures(failures)
}

/// Jacobi identity `[P, P] = 0`, via `Σ_cyc Σ_s P^{is} ∂_s P^{jk}`.
pub fn jacobi_check(p: &PolyBivector) -> IdentityCheck {
    // the symmetric form doubles every term
    let half = Rational::new(1.into(), 2.into());
    let failures = cyclic_residual(p, p, p.dim())
        .failures
        .into_iter()
        .map(|w| Witness { residual: w.residual.scale(&half), ..w })
        .collect();
    IdentityCheck::from_failures(failures)
}

/// Compatibility `[A, B] = 0`.
pub fn compatibility_check(a: &PolyBivector, b: &PolyBivector) -> Result<IdentityCheck> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    Ok(cyclic_residual(a, b, a.dim()))
}

/// Compatibility of bivectors vanishing on their last `m` rows and columns,
/// checked both on the full bivectors and on the upper-left blocks with the
/// last `m` coordinates treated as parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockCompatibility {
    pub full: IdentityCheck,
    pub block: IdentityCheck,
}

impl BlockCompatibility {
    pub fn agree(&self) -> bool {
        self.full.holds == self.block.holds
    }
}

pub fn block_compatibility_check(a: &PolyBivector, b: &PolyBivector, m: usize) -> Result<BlockCompatibility> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    let n = a.dim();
    if m > n {
        return Err(Error::InvalidArgument(format!("border size {m} exceeds dimension {n}")));
    }
    let bordered = |p: &PolyBivector| p.entries().all(|(_, j, _)| j < n - m);
    if !bordered(a) || !bordered(b) {
        return Err(Error::InvalidArgument("bivectors are not zero on the last rows and columns".into()));
    }
    let full = compatibility_check(a, b)?;
    let block = cyclic_residual(a, b, n - m);
    Ok(BlockCompatibility { full, block })
}

