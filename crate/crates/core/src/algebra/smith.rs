use super::matrix::Matrix;
use super::polynomial::Polynomial;
use num::{One, Zero};

/// Smith normal form `U · M · V = diag(d₁, …, d_r, 0, …)` over ℚ[λ].
#[derive(Clone, Debug)]
pub struct SmithForm {
    /// Monic invariant factors, each dividing the next.
    pub factors: Vec<Polynomial>,
    pub left: Matrix<Polynomial>,
    pub right: Matrix<Polynomial>,
}

/// Smith normal form by elementary row and column operations with
/// minimal-degree pivoting. Fine at desk sizes; slow beyond order ~16.
pub fn smith_normal_form(m: &Matrix<Polynomial>) -> SmithForm {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut left = Matrix::<Polynomial>::identity(rows);
    let mut right = Matrix::<Polynomial>::identity(cols);
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = min_degree_entry(&a, t, t..rows, t..cols) else {
            break;
        };
        a.swap_rows(t, pi);
        left.swap_rows(t, pi);
        a.swap_cols(t, pj);
        right.swap_cols(t, pj);
        loop {
            let mut residue = false;
            for i in t + 1..rows {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let (q, r) = a[(i, t)].div_rem(&a[(t, t)]);
                row_axpy(&mut a, i, t, &q);
                row_axpy(&mut left, i, t, &q);
                residue |= !r.is_zero();
            }
            for j in t + 1..cols {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let (q, r) = a[(t, j)].div_rem(&a[(t, t)]);
                col_axpy(&mut a, j, t, &q);
                col_axpy(&mut right, j, t, &q);
                residue |= !r.is_zero();
            }
            if residue {
                // a smaller-degree remainder sits in row t or column t
                let best = min_degree_entry(&a, t, t..rows, t..t + 1)
                    .into_iter()
                    .chain(min_degree_entry(&a, t, t..t + 1, t..cols))
                    .min_by_key(|&(i, j)| a[(i, j)].degree());
                if let Some((i, j)) = best {
                    a.swap_rows(t, i);
                    left.swap_rows(t, i);
                    a.swap_cols(t, j);
                    right.swap_cols(t, j);
                }
                continue;
            }
            let offender = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !a[(t, t)].divides(&a[(i, j)]));
            match offender {
                Some((i, _)) => {
                    // row_t += row_i brings the offending entry into row t
                    let one = -Polynomial::one();
                    row_axpy(&mut a, t, i, &one);
                    row_axpy(&mut left, t, i, &one);
                }
                None => break,
            }
        }
        let lead = a[(t, t)].leading();
        if !lead.is_one() {
            let inv = Polynomial::constant(lead.recip());
            for j in 0..cols {
                a[(t, j)] = &a[(t, j)] * &inv;
            }
            for j in 0..rows {
                left[(t, j)] = &left[(t, j)] * &inv;
            }
        }
        t += 1;
    }
    let factors = (0..rows.min(cols)).map(|i| a[(i, i)].clone()).take_while(|p| !p.is_zero()).collect();
    SmithForm { factors, left, right }
}

fn min_degree_entry(
    a: &Matrix<Polynomial>,
    _t: usize,
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Option<(usize, usize)> {
    rows.flat_map(|i| cols.clone().map(move |j| (i, j)))
        .filter(|&(i, j)| !a[(i, j)].is_zero())
        .min_by_key(|&(i, j)| a[(i, j)].degree())
}

/// `row[dst] -= q · row[src]`
fn row_axpy(a: &mut Matrix<Polynomial>, dst: usize, src: usize, q: &Polynomial) {
    for j in 0..a.cols() {
        if !a[(src, j)].is_zero() {
            let v = &a[(dst, j)] - &(q * &a[(src, j)]);
            a[(dst, j)] = v;
        }
    }
}

/// `col[dst] -= q · col[src]`
fn col_axpy(a: &mut Matrix<Polynomial>, dst: usize, src: usize, q: &Polynomial) {
    for i in 0..a.rows() {
        if !a[(i, src)].is_zero() {
            let v = &a[(i, dst)] - &(q * &a[(i, src)]);
            a[(i, dst)] = v;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::determinant;
    use crate::algebra::polynomial::LAMBDA;

    fn p(c: &[i64]) -> Polynomial {
        Polynomial::from_ints(c, LAMBDA)
    }

    fn check(m: &Matrix<Polynomial>, s: &SmithForm) {
        let d = s.left.mul(m).mul(&s.right);
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                let expect = if i == j && i < s.factors.len() { s.factors[i].clone() } else { Polynomial::zero() };
                assert_eq!(d[(i, j)], expect);
            }
        }
        assert!(determinant(&s.left).unwrap().is_constant());
        assert!(determinant(&s.right).unwrap().is_constant());
        for w in s.factors.windows(2) {
            assert!(w[0].divides(&w[1]));
        }
    }

    #[test]
    fn examples() {
        let diag = Matrix::from_rows(vec![vec![p(&[1]), p(&[])], vec![p(&[]), p(&[0, 1])]], 2);
        let s = smith_normal_form(&diag);
        assert_eq!(s.factors, vec![p(&[1]), p(&[0, 1])]);
        check(&diag, &s);

        let jordan = Matrix::from_rows(vec![vec![p(&[0, 1]), p(&[1])], vec![p(&[]), p(&[0, 1])]], 2);
        let s = smith_normal_form(&jordan);
        assert_eq!(s.factors, vec![p(&[1]), p(&[0, 0, 1])]);
        check(&jordan, &s);

        let zero = Matrix::<Polynomial>::zeros(3, 2);
        assert!(smith_normal_form(&zero).factors.is_empty());
    }

    #[test]
    fn divisibility_repair() {
        // diag(λ, λ - 1) needs the row-combination step: factors (1, λ(λ - 1))
        let m = Matrix::from_rows(vec![vec![p(&[0, 1]), p(&[])], vec![p(&[]), p(&[-1, 1])]], 2);
        let s = smith_normal_form(&m);
        assert_eq!(s.factors, vec![p(&[1]), p(&[0, -1, 1])]);
        check(&m, &s);
    }
}
