//! Polynomial Casimirs of bounded degree by linear algebra on coefficients.

use super::{MultiPoly, PolyBivector};
use crate::algebra::{Matrix, Rational};
use crate::subspace::Subspace;
use num::{One, Zero};
use std::collections::BTreeMap;

/// Exponent vectors of total degree ≤ d, ordered by degree then lexicographically.
fn monomials(n: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for e in (0..=left).rev() {
            cur.push(e);
            rec(n, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for deg in 0..=d {
        let mut level = Vec::new();
        rec(n, deg, &mut Vec::new(), &mut level);
        level.retain(|e| e.iter().sum::<u32>() == deg);
        out.extend(level);
    }
    out
}

/// Basis of `{f : P·df ≡ 0, deg f ≤ d}` in reduced echelon form over the
/// monomials ordered by degree.
pub fn polynomial_casimirs(p: &PolyBivector, d: u32) -> Vec<MultiPoly> {
    let n = p.dim();
    let monos = monomials(n, d);
    // column per monomial; rows indexed by (component, exponent) of P·dm
    let mut rows: BTreeMap<(usize, Vec<u32>), Vec<Rational>> = BTreeMap::new();
    for (col, e) in monos.iter().enumerate() {
        let m = MultiPoly::from_terms(n, [(e.clone(), Rational::one())]);
        for (i, comp) in p.apply_differential(&m).iter().enumerate() {
            for (exp, c) in comp.terms() {
                rows.entry((i, exp.clone())).or_insert_with(|| vec![Rational::zero(); monos.len()])[col] += c;
            }
        }
    }
    let system = Matrix::from_rows(rows.into_values().collect(), monos.len());
    let kernel = Subspace::from_matrix(&crate::algebra::kernel_basis(&system));
    kernel
        .vectors()
        .into_iter()
        .map(|v| MultiPoly::from_terms(n, monos.iter().cloned().zip(v)))
        .collect()
}
