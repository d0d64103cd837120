use super::polynomial::{poly_gcd, Polynomial};
use super::rational::{rational_to_f64, Rational};
use nalgebra::{linalg::Schur, Complex, DMatrix};
use num::{BigInt, FromPrimitive, Integer, One, Signed, ToPrimitive, Zero};
use std::fmt;

pub type Complex64 = Complex<f64>;

/// `unit · Π factorᵉ` with monic irreducible factors over ℚ in ascending order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: Rational,
    pub factors: Vec<(Polynomial, usize)>,
}

impl Factorization {
    pub fn expand(&self) -> Polynomial {
        let mut acc = Polynomial::constant(self.unit.clone());
        for (f, e) in &self.factors {
            acc = &acc * &f.pow(*e);
        }
        acc
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.unit.is_one() || self.factors.is_empty() {
            parts.push(self.unit.to_string());
        }
        for (p, e) in &self.factors {
            let body = if self.factors.len() == 1 && *e == 1 && parts.is_empty() {
                p.to_string()
            } else {
                format!("({p})")
            };
            parts.push(if *e == 1 { body } else { format!("{body}^{e}") });
        }
        write!(f, "{}", parts.join(" "))
    }
}

/// Yun's squarefree decomposition: monic `(sᵢ, i)` with `p = c · Π sᵢⁱ`,
/// the `sᵢ` pairwise coprime and squarefree. Trivial factors are dropped.
pub fn factor_squarefree(p: &Polynomial) -> Vec<(Polynomial, usize)> {
    if p.is_constant() {
        return Vec::new();
    }
    let p = p.monic();
    let dp = p.derivative();
    let mut a = poly_gcd(&p, &dp);
    let mut b = p.div_rem(&a).0;
    let mut c = dp.div_rem(&a).0;
    let mut d = &c - &b.derivative();
    let mut out = Vec::new();
    let mut i = 1;
    loop {
        a = poly_gcd(&b, &d);
        if !a.is_constant() {
            out.push((a.clone(), i));
        }
        b = b.div_rem(&a).0;
        if b.is_constant() {
            break;
        }
        c = d.div_rem(&a).0;
        d = &c - &b.derivative();
        i += 1;
    }
    out
}

/// Factorization into monic irreducibles over ℚ.
///
/// Rational roots are found exactly (numeric candidates, exact check). Any
/// remaining factor of degree at most 3 is irreducible; larger ones are split
/// by testing conjugation-closed subsets of numeric roots for exact integer
/// divisors. Adequate for the small degrees that occur in pencil spectra.
pub fn irreducible_factors(p: &Polynomial) -> Factorization {
    assert!(!p.is_zero(), "factorization of the zero polynomial");
    let var = p.var();
    let unit = p.leading();
    let mut factors = Vec::new();
    for (s, mult) in factor_squarefree(p) {
        for f in split_squarefree(&s) {
            factors.push((f.with_var(var), mult));
        }
    }
    factors.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
    Factorization { unit, factors }
}

fn split_squarefree(s: &Polynomial) -> Vec<Polynomial> {
    let mut rest = s.monic();
    let mut out = Vec::new();
    for root in rational_roots(&rest) {
        let lin = Polynomial::linear_root(root, rest.var());
        rest = rest.div_rem(&lin).0;
        out.push(lin);
    }
    if !rest.is_constant() {
        out.extend(split_by_root_subsets(&rest));
    }
    out
}

fn rational_roots(s: &Polynomial) -> Vec<Rational> {
    let ints = s.primitive_integer();
    let lead = ints.last().cloned().unwrap_or_else(BigInt::one).abs();
    let mut roots: Vec<Rational> = Vec::new();
    if s.coeff(0).is_zero() {
        roots.push(Rational::zero());
    }
    for z in numeric_roots(s) {
        if z.im.abs() > 1e-6 * (1.0 + z.re.abs()) || !z.re.is_finite() {
            continue;
        }
        for cand in convergents(z.re, 40) {
            if !lead.is_multiple_of(cand.denom()) {
                continue;
            }
            if !roots.contains(&cand) && s.eval(&cand).is_zero() {
                roots.push(cand);
                break;
            }
        }
    }
    roots.sort();
    roots
}

/// Continued-fraction convergents of `x`.
fn convergents(x: f64, max_terms: usize) -> Vec<Rational> {
    let mut out = Vec::new();
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut r = x;
    for _ in 0..max_terms {
        let a = r.floor();
        let Some(ai) = BigInt::from_f64(a) else { break };
        let h2 = &ai * &h1 + &h0;
        let k2 = &ai * &k1 + &k0;
        out.push(Rational::new(h2.clone(), k2.clone()));
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = r - a;
        if frac.abs() < 1e-12 || k1.bits() > 60 {
            break;
        }
        r = 1.0 / frac;
    }
    out
}

fn split_by_root_subsets(s: &Polynomial) -> Vec<Polynomial> {
    let d = s.degree().unwrap_or(0);
    if d <= 3 {
        return vec![s.clone()];
    }
    let ints = s.primitive_integer();
    let lead = ints.last().and_then(|c| c.to_f64()).unwrap_or(1.0).abs();
    let roots = numeric_roots(s);
    // group conjugate pairs so candidate factors stay real
    let mut groups: Vec<Vec<Complex64>> = Vec::new();
    let mut used = vec![false; roots.len()];
    for i in 0..roots.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        if roots[i].im.abs() > 1e-9 {
            let partner = (0..roots.len())
                .filter(|&j| !used[j])
                .min_by(|&a, &b| (roots[a] - roots[i].conj()).norm().total_cmp(&(roots[b] - roots[i].conj()).norm()));
            if let Some(j) = partner {
                used[j] = true;
                groups.push(vec![roots[i], roots[j]]);
                continue;
            }
        }
        groups.push(vec![roots[i]]);
    }
    let g = groups.len();
    for mask in 1u64..(1u64 << g) - 1 {
        let chosen: Vec<Complex64> = (0..g).filter(|b| mask >> b & 1 == 1).flat_map(|b| groups[b].clone()).collect();
        if chosen.len() * 2 > d {
            continue;
        }
        let mut coeffs = vec![Complex64::new(lead, 0.0)];
        for r in &chosen {
            let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
            for (i, c) in coeffs.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * r;
            }
            coeffs = next;
        }
        if coeffs.iter().any(|c| (c.re - c.re.round()).abs() > 1e-3 || c.im.abs() > 1e-3) {
            continue;
        }
        let cand: Vec<Rational> = coeffs
            .iter()
            .filter_map(|c| BigInt::from_f64(c.re.round()).map(Rational::from_integer))
            .collect();
        let cand = Polynomial::new(cand, s.var());
        if cand.is_constant() {
            continue;
        }
        if cand.divides(s) {
            let quotient = s.div_rem(&cand).0;
            let mut out = split_by_root_subsets(&cand.monic());
            out.extend(split_by_root_subsets(&quotient.monic()));
            return out;
        }
    }
    vec![s.clone()]
}

/// Complex roots by companion-matrix eigenvalues, polished with Newton steps.
pub fn numeric_roots(p: &Polynomial) -> Vec<Complex64> {
    let Some(d) = p.degree() else { return Vec::new() };
    if d == 0 {
        return Vec::new();
    }
    let monic = p.monic();
    let c: Vec<f64> = monic.coeffs().iter().map(rational_to_f64).collect();
    let companion = DMatrix::from_fn(d, d, |i, j| {
        if j == d - 1 {
            -c[i]
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    let mut roots: Vec<Complex64> = match Schur::try_new(companion, f64::EPSILON, 10_000) {
        Some(schur) => schur.complex_eigenvalues().iter().copied().collect(),
        None => aberth(&c),
    };
    for z in roots.iter_mut() {
        for _ in 0..3 {
            let (v, dv) = horner_with_derivative(&c, *z);
            if dv.norm() == 0.0 {
                break;
            }
            let step = v / dv;
            if !step.re.is_finite() || !step.im.is_finite() {
                break;
            }
            let next = *z - step;
            if horner_with_derivative(&c, next).0.norm() < v.norm() {
                *z = next;
            } else {
                break;
            }
        }
    }
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    roots
}

/// Aberth–Ehrlich simultaneous iteration for a monic polynomial.
fn aberth(c: &[f64]) -> Vec<Complex64> {
    let d = c.len() - 1;
    let radius = 1.0 + c[..d].iter().fold(0.0f64, |m, a| m.max(a.abs()));
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| Complex64::from_polar(radius, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / d as f64))
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..d {
            let (v, dv) = horner_with_derivative(c, z[i]);
            if v.norm() == 0.0 {
                continue;
            }
            let ratio = v / dv;
            let repulsion: Complex64 = (0..d).filter(|&j| j != i).map(|j| Complex64::new(1.0, 0.0) / (z[i] - z[j])).sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.re.is_finite() && step.im.is_finite() {
                z[i] -= step;
                moved = moved.max(step.norm() / (1.0 + z[i].norm()));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

fn horner_with_derivative(c: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut v = Complex64::new(0.0, 0.0);
    let mut dv = Complex64::new(0.0, 0.0);
    for &a in c.iter().rev() {
        dv = dv * z + v;
        v = v * z + a;
    }
    (v, dv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::polynomial::LAMBDA;
    use crate::algebra::rat;

    fn p(c: &[i64]) -> Polynomial {
        Polynomial::from_ints(c, LAMBDA)
    }

    #[test]
    fn squarefree_decomposition() {
        let f = &(&p(&[-3, 1]).pow(2) * &p(&[5, 1])) * &p(&[1, 0, 1]).pow(3);
        let sq = factor_squarefree(&f);
        assert_eq!(sq, vec![(p(&[5, 1]), 1), (p(&[-3, 1]), 2), (p(&[1, 0, 1]), 3)]);
    }

    #[test]
    fn irreducibles() {
        let f = (&(&p(&[-3, 1]).pow(2) * &p(&[5, 2])) * &p(&[5, -2, 1])).scale(&rat(3, 1));
        let fac = irreducible_factors(&f);
        assert_eq!(fac.unit, rat(6, 1));
        assert_eq!(
            fac.factors,
            vec![
                (p(&[-3, 1]), 2),
                (Polynomial::linear_root(rat(-5, 2), LAMBDA), 1),
                (p(&[5, -2, 1]), 1)
            ]
        );
        assert_eq!(fac.expand(), f);
        assert_eq!(irreducible_factors(&p(&[-3, 1]).pow(2)).to_string(), "(λ - 3)^2");
    }

    #[test]
    fn quartic_splits_into_quadratics() {
        // (t² + 1)(t² - 2t + 5): no rational roots
        let f = &p(&[1, 0, 1]) * &p(&[5, -2, 1]);
        let fac = irreducible_factors(&f);
        assert_eq!(fac.factors, vec![(p(&[5, -2, 1]), 1), (p(&[1, 0, 1]), 1)]);
        // t⁴ + 1 is irreducible
        assert_eq!(irreducible_factors(&p(&[1, 0, 0, 0, 1])).factors.len(), 1);
    }

    #[test]
    fn aberth_fallback() {
        let mut r = aberth(&[1.0, 0.0, 0.0, 0.0, 1.0]);
        r.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((r[0] - Complex64::new(-h, -h)).norm() < 1e-12);
        assert!((r[3] - Complex64::new(h, h)).norm() < 1e-12);
    }

    #[test]
    fn roots_of_quadratic() {
        let r = numeric_roots(&p(&[5, -2, 1]));
        assert!((r[0] - Complex64::new(1.0, -2.0)).norm() < 1e-12);
        assert!((r[1] - Complex64::new(1.0, 2.0)).norm() < 1e-12);
    }
}
