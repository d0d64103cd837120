//! Random pencils with known invariants, shared by the integration suites.
#![allow(dead_code)]

use bipencil::algebra::{rat, Matrix, Polynomial, Rational};
use bipencil::pencil::{
    infinite_block, jordan_block, kronecker_block, Eigenvalue, JkInvariants, JordanBlocks, SkewPencil,
};
use bipencil::subspace::Subspace;
use rand::seq::IndexedRandom;
use rand::Rng;
use std::collections::BTreeMap;

#[derive(Clone, Debug)]
pub enum Block {
    /// Kronecker block of size `2k+1`.
    Kronecker(usize),
    /// Jordan block for the monic irreducible `q` (variable `t`), `m` repeats.
    Jordan(Polynomial, usize),
    Infinite(usize),
}

impl Block {
    pub fn dim(&self) -> usize {
        match self {
            Block::Kronecker(k) => 2 * k + 1,
            Block::Jordan(q, m) => 2 * m * q.degree().unwrap_or(0),
            Block::Infinite(m) => 2 * m,
        }
    }

    pub fn pencil(&self) -> SkewPencil {
        match self {
            Block::Kronecker(k) => kronecker_block(*k),
            Block::Jordan(q, m) => jordan_block(q, *m),
            Block::Infinite(m) => infinite_block(*m),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Mix {
    pub kronecker: bool,
    pub infinite: bool,
    pub quadratic: bool,
}

pub const ALL: Mix = Mix { kronecker: true, infinite: true, quadratic: true };
pub const REGULAR: Mix = Mix { kronecker: false, infinite: false, quadratic: true };

fn linear(num: i64, den: i64) -> Polynomial {
    Polynomial::linear_root(rat(num, den), 't')
}

/// Small pool so that coincident eigenvalues are common.
pub fn random_eigenpoly<R: Rng>(rng: &mut R, quadratic: bool) -> Polynomial {
    let linear_pool = [(0, 1), (1, 1), (-2, 1), (3, 2), (-1, 3), (5, 1)];
    if quadratic && rng.random_bool(0.25) {
        let pool: [&[i64]; 3] = [&[1, 0, 1], &[-2, 0, 1], &[5, -2, 1]];
        Polynomial::from_ints(pool.choose(rng).unwrap(), 't')
    } else {
        let &(n, d) = linear_pool.choose(rng).unwrap();
        linear(n, d)
    }
}

/// A random list of blocks of total dimension in `min_dim..=max_dim`.
pub fn random_blocks<R: Rng>(rng: &mut R, min_dim: usize, max_dim: usize, mix: Mix) -> Vec<Block> {
    loop {
        let target = rng.random_range(min_dim..=max_dim);
        let mut blocks = Vec::new();
        let mut used = 0;
        for _ in 0..40 {
            if used >= target {
                break;
            }
            let room = target - used;
            let b = match rng.random_range(0..6) {
                0 | 1 if mix.kronecker => Block::Kronecker(rng.random_range(0..=2)),
                2 if mix.infinite => Block::Infinite(rng.random_range(1..=2)),
                _ => Block::Jordan(random_eigenpoly(rng, mix.quadratic), rng.random_range(1..=2)),
            };
            if b.dim() <= room {
                used += b.dim();
                blocks.push(b);
            }
        }
        if used >= min_dim && used <= max_dim && !blocks.is_empty() {
            return blocks;
        }
    }
}

pub fn assemble(blocks: &[Block]) -> SkewPencil {
    let mut it = blocks.iter();
    let first = it.next().expect("at least one block").pencil();
    it.fold(first, |acc, b| acc.direct_sum(&b.pencil()))
}

/// The invariants a direct sum of blocks must have.
pub fn expected_invariants(blocks: &[Block]) -> JkInvariants {
    let mut kronecker = Vec::new();
    let mut parts: BTreeMap<Eigenvalue, Vec<usize>> = BTreeMap::new();
    for b in blocks {
        match b {
            Block::Kronecker(k) => kronecker.push(2 * k + 1),
            Block::Jordan(q, m) => parts.entry(Eigenvalue::Finite(q.clone())).or_default().push(*m),
            Block::Infinite(m) => parts.entry(Eigenvalue::Infinite).or_default().push(*m),
        }
    }
    kronecker.sort_unstable();
    let jordan = parts
        .into_iter()
        .map(|(eigenvalue, mut partition)| {
            partition.sort_unstable_by(|a, b| b.cmp(a));
            JordanBlocks { eigenvalue, partition }
        })
        .collect();
    JkInvariants { kronecker, jordan }
}

/// Characteristic polynomial predicted from the Jordan data alone.
pub fn expected_charpoly(blocks: &[Block]) -> Polynomial {
    let mut out = Polynomial::from_ints(&[1], 'λ');
    for b in blocks {
        if let Block::Jordan(q, m) = b {
            // eigenvalue roots μ appear as roots −μ in λ
            let factor = q.negate_variable().monic().with_var('λ');
            out = &out * &factor.pow(*m);
        }
    }
    out
}

/// Random unimodular integer matrix with entries in `[−bound, bound]`,
/// reached by a walk of elementary operations that stays inside the bound.
pub fn unimodular<R: Rng>(rng: &mut R, n: usize, bound: i64) -> Matrix<Rational> {
    let mut m: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    for _ in 0..6 * n {
        if n < 2 {
            break;
        }
        let i = rng.random_range(0..n);
        let j = rng.random_range(0..n);
        if i == j {
            continue;
        }
        if rng.random_bool(0.2) {
            m.swap(i, j);
            continue;
        }
        let c = if rng.random_bool(0.5) { 1 } else { -1 };
        let row: Vec<i64> = (0..n).map(|k| m[i][k] + c * m[j][k]).collect();
        if row.iter().all(|v| v.abs() <= bound) {
            m[i] = row;
        }
    }
    Matrix::from_fn(n, n, |i, j| Rational::from_integer(m[i][j].into()))
}

pub fn random_vector<R: Rng>(rng: &mut R, n: usize, bound: i64) -> Vec<Rational> {
    loop {
        let v: Vec<Rational> = (0..n).map(|_| Rational::from_integer(rng.random_range(-bound..=bound).into())).collect();
        if v.iter().any(|x| *x != Rational::from_integer(0.into())) {
            return v;
        }
    }
}

pub fn random_skew<R: Rng>(rng: &mut R, n: usize, bound: i64) -> Matrix<Rational> {
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let v = Rational::from_integer(rng.random_range(-bound..=bound).into());
            m[(j, i)] = -v.clone();
            m[(i, j)] = v;
        }
    }
    m
}

/// Embeds a subspace of the `offset..offset+k` coordinate block into dimension `n`.
pub fn embed(u: &Subspace, offset: usize, n: usize) -> Subspace {
    let rows = u
        .vectors()
        .into_iter()
        .map(|v| {
            let mut w = vec![Rational::from_integer(0.into()); n];
            w[offset..offset + v.len()].clone_from_slice(&v);
            w
        })
        .collect();
    Subspace::new(n, rows)
}
