use serde::{Deserialize, Serialize};

use super::Rational;

/// Dense row-major matrix of exact rationals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

/// Result of Gauss-Jordan elimination.
#[derive(Clone, Debug)]
pub struct RowEchelon {
    /// Reduced row echelon form; rows past `pivots.len()` are zero.
    pub matrix: RationalMatrix,
    /// Pivot column of each nonzero row, ascending.
    pub pivots: Vec<usize>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_rows_with_cols(rows, cols)
    }

    /// Like [`from_rows`](Self::from_rows) but with an explicit column count,
    /// which matters when there are no rows. Panics on ragged input.
    pub fn from_rows_with_cols(rows: Vec<Vec<Rational>>, cols: usize) -> Self {
        let n_rows = rows.len();
        let mut entries = Vec::with_capacity(n_rows * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged rows");
            entries.extend(row);
        }
        RationalMatrix {
            rows: n_rows,
            cols,
            entries,
        }
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Rational::from_integer(v)).collect())
                .collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Rational> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    /// Keeps the listed columns, in the listed order.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut out = Self::zeros(self.rows, cols.len());
        for r in 0..self.rows {
            for (k, &c) in cols.iter().enumerate() {
                out.set(r, k, self.get(r, c).clone());
            }
        }
        out
    }

    pub fn remove_column(&self, col: usize) -> Self {
        let keep: Vec<usize> = (0..self.cols).filter(|&c| c != col).collect();
        self.select_columns(&keep)
    }

    pub fn mul_vec(&self, x: &[Rational]) -> Vec<Rational> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows).map(|r| dot(self.row(r), x)).collect()
    }

    /// `selfᵀ y` without materializing the transpose.
    pub fn transpose_mul_vec(&self, y: &[Rational]) -> Vec<Rational> {
        assert_eq!(y.len(), self.rows);
        let mut out = vec![Rational::zero(); self.cols];
        for (r, yr) in y.iter().enumerate() {
            if yr.is_zero() {
                continue;
            }
            for (c, a) in self.row(r).iter().enumerate() {
                if !a.is_zero() {
                    out[c] += &(a * yr);
                }
            }
        }
        out
    }

    /// Gauss-Jordan elimination to reduced row echelon form.
    pub fn rref(&self) -> RowEchelon {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut lead = 0;
        for c in 0..m.cols {
            if lead == m.rows {
                break;
            }
            let Some(p) = (lead..m.rows).find(|&r| !m.get(r, c).is_zero()) else {
                continue;
            };
            m.swap_rows(lead, p);
            let inv = m.get(lead, c).recip();
            if inv != Rational::one() {
                for k in c..m.cols {
                    let v = m.get(lead, k) * &inv;
                    m.set(lead, k, v);
                }
            }
            let pivot_row: Vec<(usize, Rational)> = (c..m.cols)
                .filter_map(|k| {
                    let v = m.get(lead, k);
                    (!v.is_zero()).then(|| (k, v.clone()))
                })
                .collect();
            for r in 0..m.rows {
                if r == lead {
                    continue;
                }
                let factor = m.get(r, c).clone();
                if factor.is_zero() {
                    continue;
                }
                for (k, v) in &pivot_row {
                    let nv = m.get(r, *k) - &(&factor * v);
                    m.set(r, *k, nv);
                }
            }
            pivots.push(c);
            lead += 1;
        }
        RowEchelon { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of `{x : self · x = 0}`, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let ech = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &ech.pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![Rational::zero(); self.cols];
            v[free] = Rational::one();
            for (row, &p) in ech.pivots.iter().enumerate() {
                let coef = ech.matrix.get(row, free);
                if !coef.is_zero() {
                    v[p] = -coef;
                }
            }
            basis.push(v);
        }
        basis
    }

    /// Some solution of `self · x = rhs`, or `None` when inconsistent.
    pub fn solve(&self, rhs: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(rhs.len(), self.rows);
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for (r, v) in rhs.iter().enumerate() {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, self.cols, v.clone());
        }
        let ech = aug.rref();
        if ech.pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (row, &p) in ech.pivots.iter().enumerate() {
            x[p] = ech.matrix.get(row, self.cols).clone();
        }
        Some(x)
    }

    /// A maximal linearly independent subset of the rows, in echelon form.
    pub fn row_basis(&self) -> RationalMatrix {
        let ech = self.rref();
        let k = ech.pivots.len();
        let rows = (0..k).map(|r| ech.matrix.row(r).to_vec()).collect();
        RationalMatrix::from_rows_with_cols(rows, self.cols)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    let mut acc = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += &(x * y);
        }
    }
    acc
}
