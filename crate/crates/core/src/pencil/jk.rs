//! Jordan–Kronecker invariants of a skew pencil.

use super::{Eigenvalue, SkewPencil};
use crate::algebra::{irreducible_factors, rank, smith_normal_form, Matrix, Polynomial, Rational};
use crate::error::{Error, Result};
use num::Zero;
use std::fmt;

/// Jordan partition attached to one eigenvalue.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct JordanBlocks {
    pub eigenvalue: Eigenvalue,
    /// Block sizes, non-increasing. An entry `m` is one skew block of size
    /// `2·m·deg` where `deg` is the degree of the eigenvalue.
    pub partition: Vec<usize>,
}

/// Kronecker block sizes (each `2k+1`, ascending) plus Jordan partitions
/// per eigenvalue, sorted by eigenvalue.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct JkInvariants {
    pub kronecker: Vec<usize>,
    pub jordan: Vec<JordanBlocks>,
}

impl JkInvariants {
    /// Dimension of the space the invariants describe.
    pub fn dimension(&self) -> usize {
        let kron: usize = self.kronecker.iter().sum();
        let jordan: usize = self
            .jordan
            .iter()
            .map(|j| 2 * j.eigenvalue.degree() * j.partition.iter().sum::<usize>())
            .sum();
        kron + jordan
    }

    /// Rank of the pencil: each Kronecker block loses one dimension.
    pub fn rank(&self) -> usize {
        self.dimension() - self.kronecker.len()
    }

    pub fn partition_of(&self, eigenvalue: &Eigenvalue) -> Option<&[usize]> {
        self.jordan.iter().find(|j| &j.eigenvalue == eigenvalue).map(|j| j.partition.as_slice())
    }

    /// Bundle data over ℂ: sorted Kronecker sizes and the sorted list of
    /// partitions, one per complex eigenvalue (∞ counted as a value).
    pub fn bundle_signature(&self) -> (Vec<usize>, Vec<Vec<usize>>) {
        let mut kron = self.kronecker.clone();
        kron.sort_unstable();
        let mut parts: Vec<Vec<usize>> = Vec::new();
        for j in &self.jordan {
            for _ in 0..j.eigenvalue.degree() {
                parts.push(j.partition.clone());
            }
        }
        parts.sort();
        (kron, parts)
    }
}

impl fmt::Display for JkInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "kronecker {:?}", self.kronecker)?;
        for j in &self.jordan {
            write!(f, "; {}: {:?}", j.eigenvalue, j.partition)?;
        }
        Ok(())
    }
}

/// Block Toeplitz matrix `T_d` of size `(d+2)n × (d+1)n`; its kernel
/// parametrises polynomial kernel vectors of degree ≤ d.
fn toeplitz(a: &Matrix<Rational>, b: &Matrix<Rational>, d: usize) -> Matrix<Rational> {
    let n = a.rows();
    let mut t = Matrix::zeros((d + 2) * n, (d + 1) * n);
    for j in 0..=d {
        t.set_block(j * n, j * n, a);
        t.set_block((j + 1) * n, j * n, b);
    }
    t
}

fn kronecker_sizes(p: &SkewPencil, count: usize) -> Vec<usize> {
    let n = p.dim();
    let mut sizes = Vec::new();
    let (mut prev_z, mut prev_c) = (0usize, 0usize);
    let mut d = 0;
    while prev_c < count {
        let z = (d + 1) * n - rank(&toeplitz(p.a(), p.b(), d));
        let c = z - prev_z;
        for _ in prev_c..c {
            sizes.push(2 * d + 1);
        }
        prev_z = z;
        prev_c = c;
        d += 1;
    }
    sizes
}

fn valuation(p: &Polynomial, q: &Polynomial) -> usize {
    let mut v = 0;
    let mut rest = p.clone();
    while !rest.is_zero() {
        let (quot, rem) = rest.div_rem(q);
        if !rem.is_zero() {
            break;
        }
        rest = quot;
        v += 1;
    }
    v
}

/// Halves a list of elementary-divisor exponents, which skew symmetry
/// forces to come in equal pairs.
fn paired_partition(mut exps: Vec<usize>, what: &str) -> Result<Vec<usize>> {
    exps.retain(|&e| e > 0);
    exps.sort_unstable_by(|a, b| b.cmp(a));
    if !exps.len().is_multiple_of(2) || exps.chunks(2).any(|c| c[0] != c[1]) {
        return Err(Error::Consistency(format!("unpaired elementary divisors {exps:?} for {what}")));
    }
    Ok(exps.into_iter().step_by(2).collect())
}

pub(super) fn jk_invariants(p: &SkewPencil) -> Result<JkInvariants> {
    let n = p.dim();
    let r = p.rank();
    let kronecker = kronecker_sizes(p, n - r);
    let mut jordan = Vec::new();
    if r > 0 {
        let smith = smith_normal_form(&p.symbolic());
        if smith.factors.len() != r {
            return Err(Error::Consistency("Smith form length differs from rank".into()));
        }
        let last = smith.factors.last().expect("positive rank").clone();
        if !last.is_constant() {
            for (q, _) in irreducible_factors(&last).factors {
                let exps = smith.factors.iter().map(|f| valuation(f, &q)).collect();
                let eigenvalue = Eigenvalue::from_charpoly_factor(&q);
                let partition = paired_partition(exps, &eigenvalue.to_string())?;
                jordan.push(JordanBlocks { eigenvalue, partition });
            }
        }
        if rank(p.b()) < r {
            let swapped = smith_normal_form(&p.swapped().symbolic());
            let mu = Polynomial::variable('λ');
            let exps = swapped.factors.iter().map(|f| valuation(f, &mu)).collect();
            let partition = paired_partition(exps, "inf")?;
            jordan.push(JordanBlocks { eigenvalue: Eigenvalue::Infinite, partition });
        }
    }
    jordan.sort_by(|x, y| x.eigenvalue.cmp(&y.eigenvalue));
    let inv = JkInvariants { kronecker, jordan };
    if inv.dimension() != n {
        return Err(Error::Consistency(format!("invariants {inv} describe dimension {} not {n}", inv.dimension())));
    }
    Ok(inv)
}

/// Whether two pencils lie in the same bundle: equal Kronecker data and
/// equal Jordan partitions up to relabelling the (complex) eigenvalues.
pub fn same_bundle(p1: &SkewPencil, p2: &SkewPencil) -> Result<bool> {
    if p1.dim() != p2.dim() {
        return Err(Error::DimensionMismatch { expected: p1.dim(), found: p2.dim() });
    }
    Ok(p1.jk_invariants()?.bundle_signature() == p2.jk_invariants()?.bundle_signature())
}
