//! Canonical block models.

use super::{Eigenvalue, JkInvariants, SkewPencil};
use crate::algebra::{irreducible_factors, Matrix, Polynomial, Rational};
use crate::error::{Error, Result};
use num::{One, Zero};

fn skew_from_block(m: &Matrix<Rational>) -> Matrix<Rational> {
    let (r, c) = (m.rows(), m.cols());
    let mut out = Matrix::zeros(r + c, r + c);
    out.set_block(0, r, m);
    out.set_block(r, 0, &m.transpose().scale(&-Rational::one()));
    out
}

fn shift_matrix(m: usize) -> Matrix<Rational> {
    Matrix::from_fn(m, m, |i, j| if j == i + 1 { Rational::one() } else { Rational::zero() })
}

/// Kronecker block of size `2k+1`.
pub fn kronecker_block(k: usize) -> SkewPencil {
    let ka = Matrix::from_fn(k, k + 1, |i, j| if i == j { Rational::one() } else { Rational::zero() });
    let kb = Matrix::from_fn(k, k + 1, |i, j| if j == i + 1 { Rational::one() } else { Rational::zero() });
    SkewPencil::new(skew_from_block(&ka), skew_from_block(&kb)).expect("skew by construction")
}

fn companion(q: &Polynomial) -> Matrix<Rational> {
    let d = q.degree().unwrap_or(0);
    Matrix::from_fn(d, d, |i, j| {
        if j == d - 1 {
            -q.coeff(i)
        } else if i == j + 1 {
            Rational::one()
        } else {
            Rational::zero()
        }
    })
}

/// Jordan block of size `2·m·deg q` for the eigenvalue(s) with monic minimal
/// polynomial `q`: `B` standard symplectic, `A = [[0, M], [−Mᵀ, 0]]` with `M`
/// the block Jordan matrix built from the companion matrix of `q`.
pub fn jordan_block(q: &Polynomial, m: usize) -> SkewPencil {
    let c = companion(q);
    let d = c.rows();
    let mut big = Matrix::zeros(m * d, m * d);
    for i in 0..m {
        big.set_block(i * d, i * d, &c);
        if i + 1 < m {
            big.set_block(i * d, (i + 1) * d, &Matrix::identity(d));
        }
    }
    SkewPencil::new(skew_from_block(&big), skew_from_block(&Matrix::identity(m * d))).expect("skew by construction")
}

/// Real Jordan block for the conjugate pair `α ± iβ`, size `4m`.
pub fn complex_block(alpha: &Rational, beta: &Rational, m: usize) -> SkewPencil {
    let mut big = Matrix::zeros(2 * m, 2 * m);
    for i in 0..m {
        let r = 2 * i;
        big[(r, r)] = alpha.clone();
        big[(r + 1, r + 1)] = alpha.clone();
        big[(r, r + 1)] = -beta.clone();
        big[(r + 1, r)] = beta.clone();
        if i + 1 < m {
            big[(r, r + 2)] = Rational::one();
            big[(r + 1, r + 3)] = Rational::one();
        }
    }
    SkewPencil::new(skew_from_block(&big), skew_from_block(&Matrix::identity(2 * m))).expect("skew by construction")
}

/// Jordan block of size `2m` at infinity.
pub fn infinite_block(m: usize) -> SkewPencil {
    SkewPencil::new(skew_from_block(&Matrix::identity(m)), skew_from_block(&shift_matrix(m)))
        .expect("skew by construction")
}

/// Direct sum of canonical blocks realising the given invariants.
pub fn canonical_pencil(inv: &JkInvariants) -> Result<SkewPencil> {
    let bad = |msg: String| Err(Error::InconsistentInvariants(msg));
    let mut out = SkewPencil::zero(0);
    for &size in &inv.kronecker {
        if size % 2 == 0 {
            return bad(format!("Kronecker block of even size {size}"));
        }
        out = out.direct_sum(&kronecker_block(size / 2));
    }
    let mut seen = Vec::new();
    for j in &inv.jordan {
        if seen.contains(&&j.eigenvalue) {
            return bad(format!("eigenvalue {} listed twice", j.eigenvalue));
        }
        seen.push(&j.eigenvalue);
        if j.partition.is_empty() || j.partition.contains(&0) {
            return bad(format!("invalid partition {:?}", j.partition));
        }
        for &m in &j.partition {
            let block = match &j.eigenvalue {
                Eigenvalue::Infinite => infinite_block(m),
                Eigenvalue::Finite(q) => {
                    let irreducible = q.degree().is_some_and(|d| d > 0)
                        && q.is_monic()
                        && irreducible_factors(q).factors.len() == 1
                        && irreducible_factors(q).factors[0].1 == 1;
                    if !irreducible {
                        return bad(format!("{q} is not a monic irreducible polynomial"));
                    }
                    jordan_block(q, m)
                }
            };
            out = out.direct_sum(&block);
        }
    }
    Ok(out)
}
