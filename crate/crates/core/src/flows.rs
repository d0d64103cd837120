//! Double-precision integration of bi-Hamiltonian fields.
//!
//! Everything here is `f64`. Exact decisions about the pencil belong in
//! [`crate::charts`]; this module only integrates and measures drift.

use crate::charts::{hamiltonian_field, ChartPencil, FunctionFamily, MultiPoly};
use crate::error::{Error, Result};
use crate::pencil::Lambda;
use rayon::prelude::*;
use std::io::{self, Write};

/// Anything that can be integrated.
pub trait VectorField: Sync {
    fn dim(&self) -> usize;
    fn eval(&self, x: &[f64]) -> Vec<f64>;
}

/// A plain closure field of fixed dimension.
pub struct FnField<F> {
    dim: usize,
    f: F,
}

impl<F: Fn(&[f64]) -> Vec<f64> + Sync> FnField<F> {
    pub fn new(dim: usize, f: F) -> Self {
        FnField { dim, f }
    }
}

impl<F: Fn(&[f64]) -> Vec<f64> + Sync> VectorField for FnField<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, x: &[f64]) -> Vec<f64> {
        (self.f)(x)
    }
}

/// `x ↦ A_α dH_α` for every given pair; the first pair drives the flow.
#[derive(Clone, Debug, PartialEq)]
pub struct BiHamiltonianField {
    dim: usize,
    labels: Vec<Lambda>,
    components: Vec<Vec<MultiPoly>>,
}

impl BiHamiltonianField {
    pub fn labels(&self) -> &[Lambda] {
        &self.labels
    }

    /// Symbolic components of the field of the `k`-th pair.
    pub fn components(&self, k: usize) -> &[MultiPoly] {
        &self.components[k]
    }

    /// Value of the field generated by the `k`-th pair.
    pub fn eval_pair(&self, k: usize, x: &[f64]) -> Vec<f64> {
        self.components[k].iter().map(|c| c.eval_f64(x)).collect()
    }

    /// ∞-norm discrepancy between the fields of pairs `i` and `j` at `x`.
    pub fn discrepancy(&self, i: usize, j: usize, x: &[f64]) -> f64 {
        let u = self.eval_pair(i, x);
        let v = self.eval_pair(j, x);
        u.iter().zip(&v).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    /// Largest pairwise discrepancy at `x`; zero for a single pair.
    pub fn consistency(&self, x: &[f64]) -> f64 {
        let m = self.components.len();
        let mut worst = 0.0f64;
        for i in 0..m {
            for j in i + 1..m {
                worst = worst.max(self.discrepancy(i, j, x));
            }
        }
        worst
    }
}

impl VectorField for BiHamiltonianField {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, x: &[f64]) -> Vec<f64> {
        self.eval_pair(0, x)
    }
}

/// Builds the field `(A + αB)·∇H_α` for each pair.
pub fn bi_hamiltonian_field(c: &ChartPencil, hamiltonians: &[(Lambda, MultiPoly)]) -> Result<BiHamiltonianField> {
    if hamiltonians.is_empty() {
        return Err(Error::InvalidArgument("at least one Hamiltonian is required".into()));
    }
    for (_, h) in hamiltonians {
        if h.nvars() != c.dim() {
            return Err(Error::DimensionMismatch { expected: c.dim(), found: h.nvars() });
        }
    }
    Ok(BiHamiltonianField {
        dim: c.dim(),
        labels: hamiltonians.iter().map(|(l, _)| l.clone()).collect(),
        components: hamiltonians.iter().map(|(l, h)| hamiltonian_field(c, l, h)).collect(),
    })
}

/// Dense output of a fixed-step run. `error` is set when the run stopped
/// early; `states` then holds every finite state reached.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub step: f64,
    pub horizon: f64,
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub error: Option<Error>,
}

impl Trajectory {
    pub fn initial(&self) -> &[f64] {
        &self.states[0]
    }

    pub fn last(&self) -> &[f64] {
        self.states.last().expect("trajectory has its initial state")
    }

    pub fn is_complete(&self) -> bool {
        self.error.is_none()
    }

    /// One JSON object per sample: `{"t": …, "x": […], "integrals": […]}`.
    pub fn write_json_lines<W: Write>(&self, functions: &[MultiPoly], mut out: W) -> io::Result<()> {
        let list = |v: &[f64]| v.iter().map(f64::to_string).collect::<Vec<_>>().join(",");
        for (t, x) in self.times.iter().zip(&self.states) {
            let values: Vec<f64> = functions.iter().map(|f| f.eval_f64(x)).collect();
            writeln!(out, "{{\"t\":{},\"x\":[{}],\"integrals\":[{}]}}", t, list(x), list(&values))?;
        }
        Ok(())
    }
}

fn axpy(x: &[f64], a: f64, k: &[f64]) -> Vec<f64> {
    x.iter().zip(k).map(|(xi, ki)| xi + a * ki).collect()
}

fn rk4_increment<V: VectorField + ?Sized>(field: &V, x: &[f64], h: f64) -> Vec<f64> {
    let k1 = field.eval(x);
    let k2 = field.eval(&axpy(x, h / 2.0, &k1));
    let k3 = field.eval(&axpy(x, h / 2.0, &k2));
    let k4 = field.eval(&axpy(x, h, &k3));
    (0..x.len()).map(|i| h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])).collect()
}

// Knuth's two-sum: a + b = s + e exactly.
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// Number of steps for a horizon; the horizon is rounded to a whole number of steps.
pub fn step_count(horizon: f64, step: f64) -> usize {
    (horizon / step).round() as usize
}

/// Classical fourth-order fixed-step integration from `x0` up to `horizon`.
pub fn integrate<V: VectorField + ?Sized>(field: &V, x0: &[f64], horizon: f64, step: f64) -> Result<Trajectory> {
    if !(horizon > 0.0 && step > 0.0 && horizon.is_finite() && step.is_finite()) {
        return Err(Error::InvalidArgument(format!("horizon {horizon} and step {step} must be positive")));
    }
    if x0.len() != field.dim() {
        return Err(Error::DimensionMismatch { expected: field.dim(), found: x0.len() });
    }
    let n = step_count(horizon, step);
    let mut traj = Trajectory {
        step,
        horizon,
        times: Vec::with_capacity(n + 1),
        states: Vec::with_capacity(n + 1),
        error: None,
    };
    if x0.iter().any(|v| !v.is_finite()) {
        traj.error = Some(Error::NonFinite { step: 0 });
        return Ok(traj);
    }
    traj.times.push(0.0);
    traj.states.push(x0.to_vec());
    // the state is carried as x + lo so that summing 10⁴ small increments
    // does not bury the truncation error under accumulated rounding
    let mut x = x0.to_vec();
    let mut lo = vec![0.0; x.len()];
    for k in 1..=n {
        let dx = rk4_increment(field, &x, step);
        for i in 0..x.len() {
            let (s, e) = two_sum(x[i], dx[i] + lo[i]);
            x[i] = s;
            lo[i] = e;
        }
        if x.iter().any(|v| !v.is_finite()) {
            traj.error = Some(Error::NonFinite { step: k });
            break;
        }
        traj.times.push(k as f64 * step);
        traj.states.push(x.clone());
    }
    Ok(traj)
}

/// Independent runs from several initial points, in input order.
pub fn integrate_many<V: VectorField + ?Sized>(
    field: &V,
    starts: &[Vec<f64>],
    horizon: f64,
    step: f64,
) -> Result<Vec<Trajectory>> {
    starts.par_iter().map(|x0| integrate(field, x0, horizon, step)).collect()
}

struct Reversed<'a, V: ?Sized>(&'a V);

impl<V: VectorField + ?Sized> VectorField for Reversed<'_, V> {
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn eval(&self, x: &[f64]) -> Vec<f64> {
        self.0.eval(x).into_iter().map(|v| -v).collect()
    }
}

/// Integrates forward then backward over the same horizon and returns the
/// ∞-distance to the starting point.
pub fn time_reversal_error<V: VectorField + ?Sized>(field: &V, x0: &[f64], horizon: f64, step: f64) -> Result<f64> {
    let forward = integrate(field, x0, horizon, step)?;
    if let Some(e) = forward.error {
        return Err(e);
    }
    let back = integrate(&Reversed(field), forward.last(), horizon, step)?;
    if let Some(e) = back.error {
        return Err(e);
    }
    Ok(back.last().iter().zip(x0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
}

/// Drift of a function family and field consistency along a trajectory.
#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryReport {
    pub initial: Vec<f64>,
    pub step: f64,
    pub horizon: f64,
    pub samples: usize,
    /// `max_t |f(x(t)) − f(x(0))|`, one entry per family member.
    pub drifts: Vec<f64>,
    /// Max over the trajectory of the discrepancy between the fields of two pairs.
    pub inconsistency: Vec<((Lambda, Lambda), f64)>,
    /// Value of each Hamiltonian at every sample.
    pub energies: Vec<(Lambda, Vec<f64>)>,
}

impl TrajectoryReport {
    pub fn max_drift(&self) -> f64 {
        self.drifts.iter().cloned().fold(0.0, f64::max)
    }
}

/// Drift report for `family`; pass the generating field to also measure
/// consistency between its Hamiltonians.
pub fn drift_report(
    traj: &Trajectory,
    family: &FunctionFamily,
    field: Option<(&BiHamiltonianField, &[(Lambda, MultiPoly)])>,
) -> TrajectoryReport {
    let functions = family.functions();
    let x0 = traj.initial();
    let drifts = functions
        .iter()
        .map(|f| {
            let f0 = f.eval_f64(x0);
            traj.states.iter().map(|x| (f.eval_f64(x) - f0).abs()).fold(0.0, f64::max)
        })
        .collect();
    let mut inconsistency = Vec::new();
    let mut energies = Vec::new();
    if let Some((v, hamiltonians)) = field {
        let labels = v.labels();
        for i in 0..labels.len() {
            for j in i + 1..labels.len() {
                let worst = traj.states.iter().map(|x| v.discrepancy(i, j, x)).fold(0.0, f64::max);
                inconsistency.push(((labels[i].clone(), labels[j].clone()), worst));
            }
        }
        energies = hamiltonians
            .iter()
            .map(|(l, h)| (l.clone(), traj.states.iter().map(|x| h.eval_f64(x)).collect()))
            .collect();
    }
    TrajectoryReport {
        initial: x0.to_vec(),
        step: traj.step,
        horizon: traj.horizon,
        samples: traj.states.len(),
        drifts,
        inconsistency,
        energies,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charts::FunctionTag;
    use crate::algebra::Rational;
    use crate::corpus;

    fn family(fs: Vec<MultiPoly>) -> FunctionFamily {
        FunctionFamily::new(fs.into_iter().map(|f| (f, FunctionTag::Extension)).collect())
    }

    fn euler() -> (ChartPencil, Vec<(Lambda, MultiPoly)>) {
        (corpus::so3_frozen(), vec![(Lambda::int(0), corpus::euler_top_hamiltonian())])
    }

    #[test]
    fn constant_hamiltonian_gives_zero_field() {
        let c = corpus::so3_frozen();
        let v = bi_hamiltonian_field(&c, &[(Lambda::int(0), MultiPoly::constant(3, Rational::from_integer(7.into())))]).unwrap();
        assert_eq!(v.eval(&[1.0, -2.0, 0.5]), vec![0.0; 3]);
        let t = integrate(&v, &[1.0, 2.0, 3.0], 1.0, 0.1).unwrap();
        assert_eq!(t.states.len(), 11);
        assert!(t.states.iter().all(|x| x == &[1.0, 2.0, 3.0]));
        let r = drift_report(&t, &family(corpus::euler_top_integrals()), None);
        assert_eq!(r.drifts, vec![0.0, 0.0]);
    }

    #[test]
    fn euler_field_at_ones() {
        let (c, hs) = euler();
        let v = bi_hamiltonian_field(&c, &hs).unwrap();
        // v_i = Σ_j A^{ij} ∂_j H with A¹² = x₃, A²³ = x₁, A³¹ = x₂
        let x = [1.0, 1.0, 1.0];
        let oracle = [x[2] * 2.0 * x[1] - x[1] * 3.0 * x[2], x[0] * 3.0 * x[2] - x[2] * x[0], x[1] * x[0] - x[0] * 2.0 * x[1]];
        assert_eq!(v.eval(&x), oracle.to_vec());
        assert_eq!(v.eval(&x), vec![-1.0, 2.0, -1.0]);
    }

    #[test]
    fn field_is_linear_in_h() {
        let (c, hs) = euler();
        let v = bi_hamiltonian_field(&c, &hs).unwrap();
        let w = bi_hamiltonian_field(&c, &[(Lambda::int(0), hs[0].1.scale(&Rational::from_integer(3.into())))]).unwrap();
        let x = [0.3, -1.2, 2.0];
        for (a, b) in v.eval(&x).iter().zip(w.eval(&x)) {
            assert!((3.0 * a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn circle_radius_drift() {
        let v = FnField::new(2, |x: &[f64]| vec![x[1], -x[0]]);
        let t = integrate(&v, &[1.0, 0.0], 10.0, 1e-3).unwrap();
        assert_eq!(t.states.len(), 10_001);
        let r = drift_report(&t, &family(vec![MultiPoly::parse(2, "x1^2 + x2^2").unwrap()]), None);
        assert!(r.drifts[0] <= 1e-10, "{}", r.drifts[0]);
        // exact solution is (cos t, −sin t)
        let end = t.last();
        assert!((end[0] - 10f64.cos()).abs() < 1e-10 && (end[1] + 10f64.sin()).abs() < 1e-10);
    }

    #[test]
    fn euler_top_conserves_integrals() {
        let (c, hs) = euler();
        let v = bi_hamiltonian_field(&c, &hs).unwrap();
        let t = integrate(&v, &corpus::euler_top_start(), 10.0, 1e-3).unwrap();
        assert!(t.is_complete());
        assert!(t.states.iter().all(|x| x.iter().all(|c| c.abs() < 2.0)));
        let r = drift_report(&t, &family(corpus::euler_top_integrals()), Some((&v, &hs)));
        assert!(r.max_drift() <= 1e-8, "{:?}", r.drifts);
        assert_eq!(r.energies[0].1.len(), r.samples);
        assert!(r.inconsistency.is_empty());
    }

    #[test]
    fn non_integral_drifts() {
        let (c, hs) = euler();
        let v = bi_hamiltonian_field(&c, &hs).unwrap();
        // (1,1,1) lies on the separatrix and x₁ decays towards 0
        let t = integrate(&v, &[1.0, 1.0, 1.0], 10.0, 1e-3).unwrap();
        let r = drift_report(&t, &family(vec![MultiPoly::var(3, 0)]), None);
        assert!(r.drifts[0] > 0.5, "{}", r.drifts[0]);
    }

    #[test]
    fn symmetric_top_fields_agree() {
        let c = corpus::so3_frozen();
        let hs = corpus::symmetric_top_hamiltonians();
        let v = bi_hamiltonian_field(&c, &hs).unwrap();
        let t = integrate(&v, &[1.0, 0.5, -0.25], 2.0, 1e-2).unwrap();
        let r = drift_report(&t, &corpus::so3_frozen_family(), Some((&v, &hs)));
        assert_eq!(r.inconsistency.len(), 1);
        assert!(r.inconsistency[0].1 <= 1e-12);
        assert!(r.max_drift() <= 1e-8);
    }

    #[test]
    fn time_reversal_returns_home() {
        let (c, hs) = euler();
        let v = bi_hamiltonian_field(&c, &hs).unwrap();
        let err = time_reversal_error(&v, &corpus::euler_top_start(), 10.0, 1e-3).unwrap();
        assert!(err <= 1e-6, "{err}");
    }

    #[test]
    fn blow_up_keeps_partial_trajectory() {
        // x' = x² blows up at t = 1 from x = 1
        let v = FnField::new(1, |x: &[f64]| vec![x[0] * x[0]]);
        let t = integrate(&v, &[1.0], 2.0, 0.01).unwrap();
        assert!(matches!(t.error, Some(Error::NonFinite { .. })));
        assert!(t.states.len() > 50 && t.states.len() < 201);
        assert!(t.states.iter().all(|x| x[0].is_finite()));
    }

    #[test]
    fn rejects_bad_arguments() {
        let v = FnField::new(1, |x: &[f64]| x.to_vec());
        assert!(matches!(integrate(&v, &[1.0], 0.0, 0.1), Err(Error::InvalidArgument(_))));
        assert!(matches!(integrate(&v, &[1.0], 1.0, -0.1), Err(Error::InvalidArgument(_))));
        assert!(matches!(integrate(&v, &[1.0, 2.0], 1.0, 0.1), Err(Error::DimensionMismatch { .. })));
        let c = corpus::so3_frozen();
        assert!(bi_hamiltonian_field(&c, &[]).is_err());
    }

    #[test]
    fn json_lines_export() {
        let v = FnField::new(2, |x: &[f64]| vec![x[1], -x[0]]);
        let t = integrate(&v, &[1.0, 0.0], 0.2, 0.1).unwrap();
        let mut buf = Vec::new();
        t.write_json_lines(&[MultiPoly::parse(2, "x1^2 + x2^2").unwrap()], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], "{\"t\":0,\"x\":[1,0],\"integrals\":[1]}");
    }

    #[test]
    fn parallel_runs_keep_order() {
        let v = FnField::new(1, |x: &[f64]| vec![-x[0]]);
        let starts: Vec<Vec<f64>> = (1..=8).map(|k| vec![k as f64]).collect();
        let runs = integrate_many(&v, &starts, 1.0, 0.01).unwrap();
        for (k, r) in runs.iter().enumerate() {
            assert!((r.last()[0] - (k + 1) as f64 * (-1f64).exp()).abs() < 1e-8);
        }
    }

    #[test]
    fn drift_is_fourth_order() {
        let (c, hs) = euler();
        let v = bi_hamiltonian_field(&c, &hs).unwrap();
        let fam = family(corpus::euler_top_integrals());
        let d = |h: f64| drift_report(&integrate(&v, &corpus::euler_top_start(), 10.0, h).unwrap(), &fam, None).drifts;
        let (coarse, fine) = (d(1e-3), d(5e-4));
        for (a, b) in coarse.iter().zip(&fine) {
            let ratio = a / b;
            assert!((8.0..=32.0).contains(&ratio), "drift {a:e} -> {b:e}, ratio {ratio}");
        }
    }
}
