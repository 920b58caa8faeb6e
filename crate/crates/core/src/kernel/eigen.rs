use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_EIG_TOL: f64 = 1e-10;
pub const DEFAULT_RANK_TOL: f64 = 1e-8;

/// Dense symmetric matrix of binary64 values, stored row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymMatrixF {
    n: usize,
    entries: Vec<f64>,
}

impl SymMatrixF {
    pub fn zeros(n: usize) -> Self {
        SymMatrixF {
            n,
            entries: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    /// Builds from full rows; fails unless the input is exactly symmetric.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut m = Self::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has length {}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                m.entries[i * n + j] = v;
            }
        }
        for i in 0..n {
            for j in 0..i {
                if m.get(i, j) != m.get(j, i) {
                    return Err(Error::InvalidCertificate(format!(
                        "entry ({i},{j}) breaks symmetry"
                    )));
                }
            }
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

    /// Symmetric part of an arbitrary square matrix.
    pub fn from_dmatrix(d: &DMatrix<f64>) -> Self {
        let n = d.nrows();
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                let v = if i == j {
                    d[(i, i)]
                } else {
                    0.5 * (d[(i, j)] + d[(j, i)])
                };
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    /// Sets both `(i, j)` and `(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.entries[i * self.n + j] = v;
        self.entries[j * self.n + i] = v;
    }

    pub fn scaled(&self, c: f64) -> Self {
        SymMatrixF {
            n: self.n,
            entries: self.entries.iter().map(|v| v * c).collect(),
        }
    }

    pub fn add_scaled(&mut self, other: &SymMatrixF, c: f64) {
        assert_eq!(self.n, other.n);
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            *a += c * b;
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|v| v.is_finite())
    }

    pub fn to_dmatrix(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.n, self.n, &self.entries)
    }
}

/// Eigenvalues sorted descending with matching orthonormal eigenvectors.
#[derive(Clone, Debug)]
pub struct EigResult {
    pub eigenvalues: Vec<f64>,
    /// Column `k` pairs with `eigenvalues[k]`.
    pub eigenvectors: DMatrix<f64>,
}

impl EigResult {
    pub fn reconstruction_error(&self, m: &SymMatrixF) -> f64 {
        let q = &self.eigenvectors;
        let lambda = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(self.eigenvalues.clone()));
        (q * lambda * q.transpose() - m.to_dmatrix()).norm()
    }

    pub fn orthonormality_error(&self) -> f64 {
        let q = &self.eigenvectors;
        (q.transpose() * q - DMatrix::identity(q.ncols(), q.ncols())).norm()
    }
}

/// Symmetric eigendecomposition (Householder tridiagonalization followed by
/// implicit symmetric QR). Fails when the reconstruction or orthonormality
/// bound `eig_tol · max(1, ‖M‖_F)` is not met.
pub fn sym_eig(m: &SymMatrixF, eig_tol: f64) -> Result<EigResult> {
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let n = m.order();
    if n == 0 {
        return Ok(EigResult {
            eigenvalues: Vec::new(),
            eigenvectors: DMatrix::zeros(0, 0),
        });
    }
    let eig = nalgebra::SymmetricEigen::new(m.to_dmatrix());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let eigenvalues = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let eigenvectors = DMatrix::from_fn(n, n, |i, k| eig.eigenvectors[(i, order[k])]);
    let result = EigResult {
        eigenvalues,
        eigenvectors,
    };
    // nalgebra is backward stable; this catches pathological non-convergence.
    let scale = m.frobenius_norm().max(1.0);
    let bound = eig_tol.max(f64::EPSILON * 64.0 * n as f64) * scale;
    if result.reconstruction_error(m) > bound || result.orthonormality_error() > bound.max(eig_tol)
    {
        return Err(Error::PreconditionFailed(
            "eigensolver accuracy bound not met".into(),
        ));
    }
    Ok(result)
}

/// Relative rank and PSD verdict from a list of eigenvalues.
pub fn classify_spectrum(eigenvalues: &[f64], rank_tol: f64) -> (bool, usize) {
    let lmax = eigenvalues.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let cut = rank_tol * lmax.max(1.0);
    let is_psd = eigenvalues.iter().all(|&v| v >= -cut);
    let rank = eigenvalues.iter().filter(|v| v.abs() > cut).count();
    (is_psd, rank)
}

/// `(is_psd, rank)` with the relative cutoff `rank_tol · max(1, |λ|_max)`.
pub fn psd_rank(m: &SymMatrixF, rank_tol: f64) -> Result<(bool, usize)> {
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let eig = sym_eig(m, DEFAULT_EIG_TOL)?;
    Ok(classify_spectrum(&eig.eigenvalues, rank_tol))
}
