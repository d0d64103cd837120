use super::matrix::Matrix;
use super::{Domain, Field};
use crate::error::{Error, Result};

/// Fraction-free (Bareiss) forward elimination. Returns the eliminated
/// matrix, the pivot columns and the parity of the row permutation.
fn bareiss<T: Domain>(m: &Matrix<T>) -> (Matrix<T>, Vec<usize>, bool) {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut prev = T::one();
    let mut pivots = Vec::new();
    let mut odd = false;
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        if p != r {
            a.swap_rows(p, r);
            odd = !odd;
        }
        let pivot = a[(r, c)].clone();
        for i in r + 1..rows {
            let lead = a[(i, c)].clone();
            for j in c + 1..cols {
                let v = pivot.clone() * a[(i, j)].clone() - lead.clone() * a[(r, j)].clone();
                a[(i, j)] = v.exact_div(&prev);
            }
            a[(i, c)] = T::zero();
        }
        prev = pivot;
        pivots.push(c);
        r += 1;
    }
    (a, pivots, odd)
}

/// Rank over the fraction field of `T`, by fraction-free elimination.
pub fn rank<T: Domain>(m: &Matrix<T>) -> usize {
    bareiss(m).1.len()
}

pub fn determinant<T: Domain>(m: &Matrix<T>) -> Result<T> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.rows();
    if n == 0 {
        return Ok(T::one());
    }
    let (a, pivots, odd) = bareiss(m);
    if pivots.len() < n {
        return Ok(T::zero());
    }
    let d = a[(n - 1, n - 1)].clone();
    Ok(if odd { -d } else { d })
}

/// Reduced row-echelon form with zero rows dropped, plus pivot columns.
pub fn rref<T: Field>(m: &Matrix<T>) -> (Matrix<T>, Vec<usize>) {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        a.swap_rows(p, r);
        let inv = T::one() / a[(r, c)].clone();
        for j in c..cols {
            a[(r, j)] = a[(r, j)].clone() * inv.clone();
        }
        for i in 0..rows {
            if i == r || a[(i, c)].is_zero() {
                continue;
            }
            let f = a[(i, c)].clone();
            for j in c..cols {
                let v = a[(i, j)].clone() - f.clone() * a[(r, j)].clone();
                a[(i, j)] = v;
            }
        }
        pivots.push(c);
        r += 1;
    }
    let keep: Vec<usize> = (0..r).collect();
    let all: Vec<usize> = (0..cols).collect();
    (a.submatrix(&keep, &all), pivots)
}

/// Basis (as rows) of the right kernel `{v : M v = 0}`.
pub fn kernel_basis<T: Field>(m: &Matrix<T>) -> Matrix<T> {
    let cols = m.cols();
    let (r, pivots) = rref(m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let basis = free
        .iter()
        .map(|&f| {
            let mut v = vec![T::zero(); cols];
            v[f] = T::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -r[(i, f)].clone();
            }
            v
        })
        .collect();
    Matrix::from_rows(basis, cols)
}

pub fn inverse<T: Field>(m: &Matrix<T>) -> Result<Matrix<T>> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.rows();
    let aug = Matrix::from_fn(n, 2 * n, |i, j| {
        if j < n {
            m[(i, j)].clone()
        } else if j - n == i {
            T::one()
        } else {
            T::zero()
        }
    });
    let (r, pivots) = rref(&aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return Err(Error::Singular);
    }
    let rows: Vec<usize> = (0..n).collect();
    let cols: Vec<usize> = (n..2 * n).collect();
    Ok(r.submatrix(&rows, &cols))
}

/// Coefficients `c` with `Σ cᵢ · basis.row(i) = v`, if `v` lies in the row space.
/// The rows of `basis` must be independent.
pub fn solve_left<T: Field>(basis: &Matrix<T>, v: &[T]) -> Option<Vec<T>> {
    let k = basis.rows();
    let n = basis.cols();
    // Columns of the system are the basis rows; augment with v.
    let aug = Matrix::from_fn(n, k + 1, |i, j| if j < k { basis[(j, i)].clone() } else { v[i].clone() });
    let (r, pivots) = rref(&aug);
    if pivots.last() == Some(&k) {
        return None;
    }
    let mut c = vec![T::zero(); k];
    for (i, &p) in pivots.iter().enumerate() {
        c[p] = r[(i, k)].clone();
    }
    Some(c)
}
