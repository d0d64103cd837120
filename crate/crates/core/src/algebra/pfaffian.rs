use super::matrix::Matrix;
use super::polynomial::Polynomial;
use super::rational::Rational;
use super::{Field, Ring};
use crate::error::{Error, Result};
use num::Zero;

fn check_shape<T: Ring>(m: &Matrix<T>) -> Result<()> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    if m.rows() % 2 == 1 {
        return Err(Error::OddOrder(m.rows()));
    }
    if !m.is_skew() {
        return Err(Error::NotSkew);
    }
    Ok(())
}

/// Pfaffian by skew elimination over a field.
///
/// Sign convention: `Pf([[0, a], [-a, 0]]) = a`, agreeing with the expansion
/// along the first row.
pub fn pfaffian<T: Field>(m: &Matrix<T>) -> Result<T> {
    check_shape(m)?;
    let n = m.rows();
    let mut a = m.clone();
    let mut result = T::one();
    let mut k = 0;
    while k < n {
        let Some(j) = (k + 1..n).find(|&j| !a[(k, j)].is_zero()) else {
            return Ok(T::zero());
        };
        if j != k + 1 {
            a.swap_rows(j, k + 1);
            a.swap_cols(j, k + 1);
            result = -result;
        }
        let pivot = a[(k, k + 1)].clone();
        result = result * pivot.clone();
        for i in k + 2..n {
            for l in i + 1..n {
                let update = (a[(k + 1, i)].clone() * a[(k, l)].clone() - a[(k, i)].clone() * a[(k + 1, l)].clone())
                    / pivot.clone();
                let v = a[(i, l)].clone() + update;
                a[(l, i)] = -v.clone();
                a[(i, l)] = v;
            }
        }
        k += 2;
    }
    Ok(result)
}

/// Pfaffian by recursive expansion along the first row. Exponential; works
/// over any commutative ring and serves as the reference for small orders.
pub fn pfaffian_by_expansion<T: Ring>(m: &Matrix<T>) -> Result<T> {
    check_shape(m)?;
    let idx: Vec<usize> = (0..m.rows()).collect();
    Ok(expand(m, &idx))
}

fn expand<T: Ring>(m: &Matrix<T>, idx: &[usize]) -> T {
    if idx.is_empty() {
        return T::one();
    }
    let first = idx[0];
    let mut total = T::zero();
    for (pos, &j) in idx.iter().enumerate().skip(1) {
        let entry = &m[(first, j)];
        if entry.is_zero() {
            continue;
        }
        let rest: Vec<usize> = idx.iter().enumerate().filter(|&(p, _)| p != 0 && p != pos).map(|(_, &x)| x).collect();
        let term = entry.clone() * expand(m, &rest);
        // positions 1, 3, 5, ... carry a plus sign
        total = if pos % 2 == 1 { total + term } else { total - term };
    }
    total
}

/// Pfaffian of a skew matrix of univariate polynomials: exact rational
/// Pfaffians at enough sample points, then Newton interpolation.
pub fn polynomial_pfaffian(m: &Matrix<Polynomial>) -> Result<Polynomial> {
    check_shape(m)?;
    let n = m.rows();
    let var = m.entries().find(|p| !p.is_constant()).map_or('λ', |p| p.var());
    let max_deg = m.entries().filter_map(|p| p.degree()).max().unwrap_or(0);
    let bound = (n / 2) * max_deg;
    let xs: Vec<Rational> = (0..=bound as i64).map(|x| Rational::from_integer(x.into())).collect();
    let ys = xs
        .iter()
        .map(|x| pfaffian(&m.map(|p| p.eval(x))))
        .collect::<Result<Vec<_>>>()?;
    Ok(interpolate(&xs, &ys).with_var(var))
}

/// Newton-form interpolation through `(xs[i], ys[i])`.
pub(crate) fn interpolate(xs: &[Rational], ys: &[Rational]) -> Polynomial {
    let n = xs.len();
    let mut dd = ys.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - level]);
        }
    }
    let mut poly = Polynomial::zero();
    for i in (0..n).rev() {
        let factor = Polynomial::linear_root(xs[i].clone(), 'λ');
        poly = &(&poly * &factor) + &Polynomial::constant(dd[i].clone());
    }
    poly
}
