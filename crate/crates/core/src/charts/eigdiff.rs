//! Numeric checks of `(A − μB)·dμ = 0` for eigenvalue functions `μ(x)`.
//!
//! Eigenvalues at a point come from the exact characteristic polynomial of
//! the evaluated pencil (points are doubles converted exactly to rationals);
//! only root finding and differencing are floating point. Real eigenvalues
//! are tested by `‖(A − μB)·dμ‖∞`; a complex eigenvalue by the distance of
//! `dμ = dα + i·dβ` from `Ker(A − μB) + K` over ℂ, where `K` is the core.

use super::ChartPencil;
use crate::algebra::{numeric_roots, rational_from_f64, rational_to_f64, Rational};
use crate::pencil::SkewPencil;
use nalgebra::{Complex, DMatrix, DVector};
use rayon::prelude::*;

type C64 = Complex<f64>;
/// Eigenvalues at a point, `None` when they cannot be computed.
type Roots = Option<Vec<C64>>;

/// Pass, fail, or not decidable at this point (e.g. colliding roots).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl Status {
    /// Combines per-item statuses: any failure fails, otherwise any
    /// inconclusive item makes the whole inconclusive.
    pub fn combine(items: impl IntoIterator<Item = Status>) -> Status {
        let mut out = Status::Pass;
        for s in items {
            match (out, s) {
                (_, Status::Fail) => return Status::Fail,
                (Status::Pass, Status::Inconclusive) => out = Status::Inconclusive,
                _ => {}
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenDifferential {
    pub value: C64,
    pub complex: bool,
    pub gradient: Vec<C64>,
    pub residual: f64,
    pub status: Status,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigDiffReport {
    pub point: Vec<f64>,
    pub step: f64,
    pub tolerance: f64,
    pub entries: Vec<EigenDifferential>,
    pub status: Status,
}

fn exact_point(x: &[f64]) -> Vec<Rational> {
    x.iter().map(|&v| rational_from_f64(v)).collect()
}

/// Distinct eigenvalues `μ = −root` of the characteristic polynomial at `x`.
fn eigenvalues_at(c: &ChartPencil, x: &[Rational]) -> Option<Vec<C64>> {
    let p = c.evaluate_at(x);
    if p.rank() == 0 {
        return Some(Vec::new());
    }
    let cp = p.characteristic_polynomial().ok()?;
    Some(numeric_roots(&cp.squarefree_part()).into_iter().map(|r| -r).collect())
}

fn to_complex(m: &DMatrix<f64>) -> DMatrix<C64> {
    m.map(|v| C64::new(v, 0.0))
}

fn core_basis(p: &SkewPencil) -> Vec<DVector<C64>> {
    p.core_subspace()
        .vectors()
        .iter()
        .map(|v| DVector::from_iterator(v.len(), v.iter().map(|x| C64::new(rational_to_f64(x), 0.0))))
        .collect()
}

/// Orthonormal basis (as columns) of the span of the given vectors.
fn orthonormal_span(vectors: &[DVector<C64>], n: usize) -> DMatrix<C64> {
    if vectors.is_empty() {
        return DMatrix::zeros(n, 0);
    }
    let m = DMatrix::from_columns(vectors);
    let svd = m.svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let top = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
    let keep: Vec<usize> = (0..svd.singular_values.len()).filter(|&i| svd.singular_values[i] > 1e-10 * top.max(1.0)).collect();
    DMatrix::from_columns(&keep.iter().map(|&i| u.column(i).into_owned()).collect::<Vec<_>>())
}

/// Right null vectors of a complex matrix (singular values below a relative threshold).
fn null_vectors(m: &DMatrix<C64>) -> Vec<DVector<C64>> {
    let n = m.ncols();
    let svd = m.clone().svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let top = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
    let mut out = Vec::new();
    for i in 0..n {
        let s = if i < svd.singular_values.len() { svd.singular_values[i] } else { 0.0 };
        if s <= 1e-7 * top.max(1.0) {
            out.push(v_t.row(i).adjoint());
        }
    }
    out
}

/// Central-difference check of every eigenvalue function at `x` with step `h`.
pub fn eigenvalue_differential_check(c: &ChartPencil, x: &[f64], h: f64, tolerance: f64) -> EigDiffReport {
    let n = c.dim();
    let xr = exact_point(x);
    let pencil = c.evaluate_at(&xr);
    let base = match eigenvalues_at(c, &xr) {
        Some(v) => v,
        None => {
            return EigDiffReport { point: x.to_vec(), step: h, tolerance, entries: Vec::new(), status: Status::Inconclusive }
        }
    };
    // one representative per conjugate pair
    let tracked: Vec<C64> = base.iter().copied().filter(|z| z.im >= -1e-12 * (1.0 + z.norm())).collect();
    let separation = base
        .iter()
        .enumerate()
        .flat_map(|(i, a)| base[i + 1..].iter().map(move |b| (a - b).norm()))
        .fold(f64::INFINITY, f64::min);
    let radius = (separation / 4.0).min(1.0);
    // eigenvalues at x ± h e_k, exact points
    let shifted: Vec<(Roots, Roots)> = (0..n)
        .into_par_iter()
        .map(|k| {
            let mut plus = xr.clone();
            let mut minus = xr.clone();
            let step = rational_from_f64(h);
            plus[k] += &step;
            minus[k] -= &step;
            (eigenvalues_at(c, &plus), eigenvalues_at(c, &minus))
        })
        .collect();
    let a = to_complex(&c.a().matrix_f64(x));
    let b = to_complex(&c.b().matrix_f64(x));
    let core = core_basis(&pencil);
    let entries = tracked
        .iter()
        .map(|&mu| {
            let complex = mu.im.abs() > 1e-9 * (1.0 + mu.norm());
            let nearest = |roots: &Roots| -> Option<C64> {
                let roots = roots.as_ref()?;
                if roots.len() != base.len() {
                    return None;
                }
                let best = roots.iter().min_by(|p, q| (*p - mu).norm().total_cmp(&(*q - mu).norm()))?;
                ((best - mu).norm() <= radius).then_some(*best)
            };
            let mut gradient = Vec::with_capacity(n);
            for (plus, minus) in &shifted {
                match (nearest(plus), nearest(minus)) {
                    (Some(p), Some(m)) => gradient.push((p - m) / (2.0 * h)),
                    _ => {
                        return EigenDifferential {
                            value: mu,
                            complex,
                            gradient: Vec::new(),
                            residual: f64::NAN,
                            status: Status::Inconclusive,
                            note: "eigenvalue not trackable within the step (root collision)".into(),
                        }
                    }
                }
            }
            let g = DVector::from_vec(gradient.clone());
            let m = &a - &b * mu;
            let residual = if complex {
                let mut span = null_vectors(&m);
                span.extend(core.iter().cloned());
                let q = orthonormal_span(&span, n);
                let proj = &q * (q.adjoint() * &g);
                (&g - proj).iter().map(|z| z.norm()).fold(0.0, f64::max)
            } else {
                let g_real = g.map(|z| C64::new(z.re, 0.0));
                (&m * g_real).iter().map(|z| z.norm()).fold(0.0, f64::max)
            };
            let status = if residual <= tolerance { Status::Pass } else { Status::Fail };
            EigenDifferential { value: mu, complex, gradient, residual, status, note: String::new() }
        })
        .collect::<Vec<_>>();
    let status = Status::combine(entries.iter().map(|e| e.status));
    EigDiffReport { point: x.to_vec(), step: h, tolerance, entries, status }
}

/// Residuals per eigenvalue across several steps and the observed order.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceReport {
    pub point: Vec<f64>,
    pub steps: Vec<f64>,
    pub values: Vec<C64>,
    /// `residuals[i][k]`: eigenvalue `i` at step `k`.
    pub residuals: Vec<Vec<f64>>,
    /// `None` when residuals are at round-off level for every step, so no
    /// order can be observed.
    pub orders: Vec<Option<f64>>,
    pub status: Status,
}

/// Residual level treated as exact zero when estimating orders.
pub const ROUND_OFF_FLOOR: f64 = 1e-12;

/// Observed order `log(r₁/r₂)/log(h₁/h₂)`, averaged over consecutive steps.
pub fn observed_order(steps: &[f64], residuals: &[f64]) -> Option<f64> {
    if residuals.iter().all(|&r| r < ROUND_OFF_FLOOR) || residuals.iter().any(|r| !r.is_finite() || *r <= 0.0) {
        return None;
    }
    let orders: Vec<f64> = steps
        .windows(2)
        .zip(residuals.windows(2))
        .map(|(h, r)| (r[0] / r[1]).ln() / (h[0] / h[1]).ln())
        .collect();
    Some(orders.iter().sum::<f64>() / orders.len() as f64)
}

pub fn eigenvalue_differential_convergence(c: &ChartPencil, x: &[f64], steps: &[f64]) -> ConvergenceReport {
    let reports: Vec<EigDiffReport> =
        steps.iter().map(|&h| eigenvalue_differential_check(c, x, h, f64::INFINITY)).collect();
    let count = reports.first().map_or(0, |r| r.entries.len());
    let consistent = reports.iter().all(|r| r.entries.len() == count);
    let values: Vec<C64> = reports.first().map(|r| r.entries.iter().map(|e| e.value).collect()).unwrap_or_default();
    let residuals: Vec<Vec<f64>> = if consistent {
        (0..count).map(|i| reports.iter().map(|r| r.entries[i].residual).collect()).collect()
    } else {
        Vec::new()
    };
    let orders: Vec<Option<f64>> = residuals.iter().map(|r| observed_order(steps, r)).collect();
    let inconclusive = !consistent || reports.iter().any(|r| r.status == Status::Inconclusive);
    let status = if inconclusive { Status::Inconclusive } else { Status::Pass };
    ConvergenceReport { point: x.to_vec(), steps: steps.to_vec(), values, residuals, orders, status }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_from_residuals() {
        let steps = [1e-3, 5e-4, 2.5e-4];
        let r: Vec<f64> = steps.iter().map(|h| 3.0 * h * h).collect();
        assert!((observed_order(&steps, &r).unwrap() - 2.0).abs() < 1e-9);
        assert_eq!(observed_order(&steps, &[0.0, 1e-15, 0.0]), None);
    }

    #[test]
    fn status_combination() {
        assert_eq!(Status::combine([Status::Pass, Status::Inconclusive]), Status::Inconclusive);
        assert_eq!(Status::combine([Status::Inconclusive, Status::Fail]), Status::Fail);
        assert_eq!(Status::combine([]), Status::Pass);
    }
}
