//! The recursion operator `P = B⁻¹A` and its Jordan–Chevalley split.

use crate::algebra::{inverse, poly_gcd, solve_left, Matrix, Polynomial, Rational};
use crate::error::{Error, Result};
use crate::pencil::{SkewPencil, EIGEN_VAR};
use num::{One, Zero};

/// `q(M)` by Horner's scheme.
pub fn eval_at_matrix(q: &Polynomial, m: &Matrix<Rational>) -> Matrix<Rational> {
    let n = m.rows();
    let mut acc = Matrix::zeros(n, n);
    for c in q.coeffs().iter().rev() {
        acc = acc.mul(m).add(&Matrix::identity(n).scale(c));
    }
    acc
}

/// Minimal polynomial of a square matrix, as the lcm of the minimal
/// polynomials of the standard basis vectors (Krylov sequences).
pub fn minimal_polynomial(m: &Matrix<Rational>) -> Polynomial {
    let n = m.rows();
    let mut lcm = Polynomial::one().with_var(EIGEN_VAR);
    for i in 0..n {
        let mut e = vec![Rational::zero(); n];
        e[i] = Rational::one();
        if lcm.degree() == Some(n) {
            break;
        }
        let mut krylov: Vec<Vec<Rational>> = vec![e];
        let q = loop {
            let next = m.mul_vec(krylov.last().expect("nonempty"));
            let basis = Matrix::from_rows(krylov.clone(), n);
            if let Some(c) = solve_left(&basis, &next) {
                let mut coeffs: Vec<Rational> = c.into_iter().map(|x| -x).collect();
                coeffs.push(Rational::one());
                break Polynomial::new(coeffs, EIGEN_VAR);
            }
            krylov.push(next);
        };
        let g = poly_gcd(&lcm, &q);
        lcm = (&lcm * &q).div_rem(&g).0.monic();
    }
    lcm.with_var(EIGEN_VAR)
}

/// `P = B⁻¹A` with its semisimple and nilpotent parts.
#[derive(Clone, Debug, PartialEq)]
pub struct RecursionOperator {
    p: Matrix<Rational>,
    semisimple: Matrix<Rational>,
    nilpotent: Matrix<Rational>,
    minpoly: Polynomial,
}

impl RecursionOperator {
    pub fn new(pencil: &SkewPencil) -> Result<Self> {
        let b_inv = inverse(pencil.b()).map_err(|_| Error::SingularB)?;
        let p = b_inv.mul(pencil.a());
        let minpoly = minimal_polynomial(&p);
        let s = minpoly.squarefree_part();
        let ds = s.derivative();
        // Newton iteration S ← S − s(S)·s′(S)⁻¹ converges in finitely many steps
        let mut semisimple = p.clone();
        loop {
            let val = eval_at_matrix(&s, &semisimple);
            if val.is_zero() {
                break;
            }
            let d = inverse(&eval_at_matrix(&ds, &semisimple)).map_err(|_| {
                Error::Consistency("derivative of the squarefree part is singular".into())
            })?;
            semisimple = semisimple.sub(&val.mul(&d));
        }
        let nilpotent = p.sub(&semisimple);
        Ok(RecursionOperator { p, semisimple, nilpotent, minpoly })
    }

    pub fn matrix(&self) -> &Matrix<Rational> {
        &self.p
    }

    pub fn semisimple(&self) -> &Matrix<Rational> {
        &self.semisimple
    }

    pub fn nilpotent(&self) -> &Matrix<Rational> {
        &self.nilpotent
    }

    /// Minimal polynomial of `P`, in the variable `t`.
    pub fn minimal_polynomial(&self) -> &Polynomial {
        &self.minpoly
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn m(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x, 1)).collect()).collect(), rows.len())
    }

    #[test]
    fn minimal_polynomials() {
        let j = m(&[&[2, 1, 0], &[0, 2, 0], &[0, 0, 2]]);
        assert_eq!(minimal_polynomial(&j), Polynomial::from_ints(&[-2, 1], 't').pow(2));
        assert_eq!(minimal_polynomial(&Matrix::identity(3)), Polynomial::from_ints(&[-1, 1], 't'));
        let rot = m(&[&[0, -1], &[1, 0]]);
        assert_eq!(minimal_polynomial(&rot), Polynomial::from_ints(&[1, 0, 1], 't'));
    }

    #[test]
    fn split_commutes() {
        let a = m(&[&[0, 0, -3, 1], &[0, 0, 0, -3], &[3, 0, 0, 0], &[-1, 3, 0, 0]]);
        let b = m(&[&[0, 0, 1, 0], &[0, 0, 0, 1], &[-1, 0, 0, 0], &[0, -1, 0, 0]]);
        let r = RecursionOperator::new(&SkewPencil::new(a, b).unwrap()).unwrap();
        let (s, n) = (r.semisimple(), r.nilpotent());
        assert_eq!(s.mul(n), n.mul(s));
        assert!(n.mul(n).is_zero());
        assert!(!n.is_zero());
        assert_eq!(*s, Matrix::identity(4).scale(&rat(-3, 1)));
    }
}
