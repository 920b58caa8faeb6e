use std::collections::BTreeMap;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::kernel::SymMatrixF;

/// Sparse symmetric matrix keyed by the upper triangle `(i, j)`, `i ≤ j`.
/// Exact zeros are never stored.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SparseSym {
    n: usize,
    entries: BTreeMap<(usize, usize), f64>,
}

impl SparseSym {
    pub fn zeros(n: usize) -> Self {
        SparseSym {
            n,
            entries: BTreeMap::new(),
        }
    }

    /// Builds from `(i, j, v)` triplets (0-based, either triangle). A triplet
    /// and its mirror may not both appear with different values.
    pub fn from_triplets(n: usize, triplets: &[(usize, usize, f64)]) -> Result<Self> {
        let mut m = Self::zeros(n);
        let mut seen: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for &(i, j, v) in triplets {
            if i >= n || j >= n {
                return Err(Error::DimensionMismatch(format!(
                    "entry ({i},{j}) outside order {n}"
                )));
            }
            if !v.is_finite() {
                return Err(Error::NonFinite);
            }
            let key = (i.min(j), i.max(j));
            if let Some(&old) = seen.get(&key) {
                if old != v {
                    return Err(Error::InvalidCertificate(format!(
                        "entry ({i},{j}) breaks symmetry"
                    )));
                }
                continue;
            }
            seen.insert(key, v);
            m.set(key.0, key.1, v);
        }
        Ok(m)
    }

    pub fn diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m.set(i, i, v);
        }
        m
    }

    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n);
        m.set(i, j, 1.0);
        m
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries
            .get(&(i.min(j), i.max(j)))
            .copied()
            .unwrap_or(0.0)
    }

    /// Sets `(i, j)` and `(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let key = (i.min(j), i.max(j));
        if v == 0.0 {
            self.entries.remove(&key);
        } else {
            self.entries.insert(key, v);
        }
    }

    /// Upper-triangle entries `(i, j, v)` with `i ≤ j`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.entries.iter().map(|(&(i, j), &v)| (i, j, v))
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn add_scaled(&mut self, other: &SparseSym, c: f64) {
        assert_eq!(self.n, other.n);
        if c == 0.0 {
            return;
        }
        for (i, j, v) in other.iter() {
            let nv = self.get(i, j) + c * v;
            self.set(i, j, nv);
        }
    }

    pub fn scaled(&self, c: f64) -> Self {
        let mut out = Self::zeros(self.n);
        out.add_scaled(self, c);
        out
    }

    /// `Σ y_i mats[i]`.
    pub fn combination(n: usize, mats: &[SparseSym], y: &[f64]) -> Self {
        let mut w = Self::zeros(n);
        for (a, &yi) in mats.iter().zip(y) {
            w.add_scaled(a, yi);
        }
        w
    }

    pub fn trace(&self) -> f64 {
        self.iter()
            .filter(|(i, j, _)| i == j)
            .map(|(_, _, v)| v)
            .sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.iter()
            .map(|(i, j, v)| if i == j { v * v } else { 2.0 * v * v })
            .sum::<f64>()
            .sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.entries.values().all(|v| v.is_finite())
    }

    /// Largest off-diagonal magnitude.
    pub fn max_offdiag(&self) -> f64 {
        self.iter()
            .filter(|(i, j, _)| i != j)
            .fold(0.0, |acc, (_, _, v)| acc.max(v.abs()))
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    /// Principal submatrix on `idx` (in the listed order).
    pub fn restrict(&self, idx: &[usize]) -> SparseSym {
        let mut pos = vec![usize::MAX; self.n];
        for (k, &i) in idx.iter().enumerate() {
            pos[i] = k;
        }
        let mut out = Self::zeros(idx.len());
        for (i, j, v) in self.iter() {
            if pos[i] != usize::MAX && pos[j] != usize::MAX {
                out.set(pos[i], pos[j], v);
            }
        }
        out
    }

    pub fn to_dense(&self) -> SymMatrixF {
        let mut m = SymMatrixF::zeros(self.n);
        for (i, j, v) in self.iter() {
            m.set(i, j, v);
        }
        m
    }

    pub fn to_dmatrix(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.n, self.n);
        for (i, j, v) in self.iter() {
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
        m
    }

    pub fn from_dense(m: &SymMatrixF) -> Self {
        let mut out = Self::zeros(m.order());
        for i in 0..m.order() {
            for j in i..m.order() {
                out.set(i, j, m.get(i, j));
            }
        }
        out
    }

    /// `Vᵀ self V` for a dense `n × k` matrix `V`.
    pub fn congruence(&self, v: &DMatrix<f64>) -> DMatrix<f64> {
        assert_eq!(v.nrows(), self.n);
        let k = v.ncols();
        // self · V, accumulated from the sparse entries.
        let mut sv = DMatrix::zeros(self.n, k);
        for (i, j, a) in self.iter() {
            for c in 0..k {
                sv[(i, c)] += a * v[(j, c)];
                if i != j {
                    sv[(j, c)] += a * v[(i, c)];
                }
            }
        }
        let out = v.transpose() * sv;
        (&out + out.transpose()) * 0.5
    }

    /// Connected components of the sparsity graph restricted to `idx`, each
    /// listed in ascending order.
    pub fn components(&self, idx: &[usize]) -> Vec<Vec<usize>> {
        let mut pos = vec![usize::MAX; self.n];
        for (k, &i) in idx.iter().enumerate() {
            pos[i] = k;
        }
        let mut parent: Vec<usize> = (0..idx.len()).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            let mut c = x;
            while parent[c] != r {
                let next = parent[c];
                parent[c] = r;
                c = next;
            }
            r
        }
        for (i, j, _) in self.iter() {
            if i != j && pos[i] != usize::MAX && pos[j] != usize::MAX {
                let (a, b) = (find(&mut parent, pos[i]), find(&mut parent, pos[j]));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (k, &i) in idx.iter().enumerate() {
            let r = find(&mut parent, k);
            groups.entry(r).or_default().push(i);
        }
        groups
            .into_values()
            .map(|mut g| {
                g.sort_unstable();
                g
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triplets_and_symmetry() {
        let m = SparseSym::from_triplets(3, &[(0, 1, 2.0), (1, 0, 2.0), (2, 2, -1.0)]).unwrap();
        assert_eq!(m.get(1, 0), 2.0);
        assert_eq!(m.nnz(), 2);
        assert!(SparseSym::from_triplets(3, &[(0, 1, 2.0), (1, 0, 3.0)]).is_err());
        assert!(SparseSym::from_triplets(2, &[(0, 2, 1.0)]).is_err());
        assert_eq!(m.frobenius_norm(), (8.0f64 + 1.0).sqrt());
    }

    #[test]
    fn congruence_matches_dense() {
        let m = SparseSym::from_triplets(3, &[(0, 1, 1.0), (2, 2, 3.0), (0, 0, -2.0)]).unwrap();
        let v = DMatrix::from_row_slice(3, 2, &[1.0, 0.0, 0.5, 1.0, -1.0, 2.0]);
        let direct = v.transpose() * m.to_dmatrix() * &v;
        assert!((m.congruence(&v) - direct).norm() < 1e-14);
    }

    #[test]
    fn components_split_on_sparsity() {
        let m = SparseSym::from_triplets(5, &[(0, 3, 1.0), (1, 1, 1.0), (3, 4, 1.0)]).unwrap();
        assert_eq!(
            m.components(&[0, 1, 2, 3, 4]),
            vec![vec![0, 3, 4], vec![1], vec![2]]
        );
        assert_eq!(m.components(&[0, 1, 4]), vec![vec![0], vec![1], vec![4]]);
    }

    #[test]
    fn cancellation_removes_entries() {
        let mut a = SparseSym::unit(2, 0, 1);
        a.add_scaled(&SparseSym::unit(2, 0, 1), -1.0);
        assert_eq!(a.nnz(), 0);
    }
}
