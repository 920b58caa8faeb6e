//! Instance builders for the orthant: the row/column incidence system of a
//! binary matrix and a few small fixtures.

use rand::Rng;

use crate::kernel::{Rational, RationalMatrix};

use super::types::LinearSet;

/// The homogeneous system `H` of a binary matrix `M`: one variable per entry
/// `(i, j)` with `M_ij = 1` (row-major), one constraint per row of `M`
/// followed by one per column. Zero rows and columns give zero constraints.
#[derive(Clone, Debug)]
pub struct MatchLp {
    pub set: LinearSet,
    /// `edges[k] = (i, j)`, 0-based, the entry behind variable `k`.
    pub edges: Vec<(usize, usize)>,
}

pub fn match_matrix_lp(m: &[Vec<bool>]) -> MatchLp {
    let p = m.len();
    let q = m.first().map_or(0, Vec::len);
    let edges: Vec<(usize, usize)> = (0..p)
        .flat_map(|i| (0..q).map(move |j| (i, j)))
        .filter(|&(i, j)| m[i][j])
        .collect();
    assert!(!edges.is_empty(), "match matrix must have a nonzero entry");
    let mut a = RationalMatrix::zeros(p + q, edges.len());
    for (k, &(i, j)) in edges.iter().enumerate() {
        a.set(i, k, Rational::one());
        a.set(p + j, k, Rational::one());
    }
    MatchLp {
        set: LinearSet::homogeneous(a).expect("edges are nonempty"),
        edges,
    }
}

/// The all-ones `p × q` instance, whose maximum singularity degree is `p + q − 1`.
pub fn allone_lp(p: usize, q: usize) -> LinearSet {
    match_matrix_lp(&vec![vec![true; q]; p]).set
}

/// `M = [[1,0,1],[1,1,0]]`, variables ordered `(1,1), (1,3), (2,1), (2,2)`.
pub fn exm1_lp() -> MatchLp {
    match_matrix_lp(&[vec![true, false, true], vec![true, true, false]])
}

/// `x1 − x2 = 0`, which has a strictly positive solution.
pub fn slater_lp() -> LinearSet {
    LinearSet::from_i64(&[vec![1, -1]], &[0]).expect("fixed data")
}

/// A random `L` with `n ≤ n_max`, `m ≤ m_max`, integer entries in `[−2, 2]`
/// and `L ∩ R^n_+ ≠ ∅`: `b = A x0` for a nonnegative `x0` with random zeros,
/// or `b = 0`.
pub fn random_feasible_lp<R: Rng>(rng: &mut R, n_max: usize, m_max: usize) -> LinearSet {
    let n = rng.random_range(1..=n_max);
    let m = rng.random_range(1..=m_max);
    let a: Vec<Vec<i64>> = (0..m)
        .map(|_| (0..n).map(|_| rng.random_range(-2..=2)).collect())
        .collect();
    let b: Vec<i64> = if rng.random_bool(0.4) {
        vec![0; m]
    } else {
        let x0: Vec<i64> = (0..n)
            .map(|_| {
                if rng.random_bool(0.5) {
                    0
                } else {
                    rng.random_range(1..=2)
                }
            })
            .collect();
        a.iter()
            .map(|row| row.iter().zip(&x0).map(|(u, v)| u * v).sum())
            .collect()
    };
    LinearSet::from_i64(&a, &b).expect("consistent dimensions")
}
