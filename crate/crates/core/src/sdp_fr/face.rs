use std::collections::BTreeSet;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{classify_spectrum, sym_eig, SymMatrixF, DEFAULT_EIG_TOL};

use super::problem::SdpProblem;
use super::sparse::SparseSym;

/// A face `{X ⪰ 0 : range(X) ⊆ range(V)}` of the PSD cone.
#[derive(Clone, Debug)]
pub enum SdpFace {
    /// `V` spans the coordinate vectors of `support`; equals
    /// `{X ⪰ 0 : X(N∖S, N∖S) = 0}`.
    Block { n: usize, support: BTreeSet<usize> },
    /// `V` is a column-orthonormal `n × k` matrix.
    Basis { n: usize, v: DMatrix<f64> },
}

impl SdpFace {
    pub fn full(n: usize) -> Self {
        SdpFace::Block {
            n,
            support: (0..n).collect(),
        }
    }

    pub fn block(n: usize, support: impl IntoIterator<Item = usize>) -> Result<Self> {
        let support: BTreeSet<usize> = support.into_iter().collect();
        if support.iter().any(|&i| i >= n) {
            return Err(Error::DimensionMismatch(format!(
                "block support outside 0..{n}"
            )));
        }
        Ok(SdpFace::Block { n, support })
    }

    /// Orthonormalizes the columns of `v` (rank-revealing, so dependent
    /// columns are dropped).
    pub fn from_basis(v: DMatrix<f64>, tol: f64) -> Self {
        let n = v.nrows();
        SdpFace::Basis {
            n,
            v: orthonormalize(&v, tol),
        }
    }

    pub fn n(&self) -> usize {
        match self {
            SdpFace::Block { n, .. } | SdpFace::Basis { n, .. } => *n,
        }
    }

    /// Face dimension parameter: the rank of `V`.
    pub fn k(&self) -> usize {
        match self {
            SdpFace::Block { support, .. } => support.len(),
            SdpFace::Basis { v, .. } => v.ncols(),
        }
    }

    pub fn block_support(&self) -> Option<&BTreeSet<usize>> {
        match self {
            SdpFace::Block { support, .. } => Some(support),
            SdpFace::Basis { .. } => None,
        }
    }

    pub fn basis(&self) -> DMatrix<f64> {
        match self {
            SdpFace::Block { n, support } => {
                let mut v = DMatrix::zeros(*n, support.len());
                for (c, &i) in support.iter().enumerate() {
                    v[(i, c)] = 1.0;
                }
                v
            }
            SdpFace::Basis { v, .. } => v.clone(),
        }
    }

    /// `‖VᵀV − I‖_F`.
    pub fn orthonormality_error(&self) -> f64 {
        match self {
            SdpFace::Block { .. } => 0.0,
            SdpFace::Basis { v, .. } => {
                (v.transpose() * v - DMatrix::identity(v.ncols(), v.ncols())).norm()
            }
        }
    }

    /// `Vᵀ W V` as a dense `k × k` matrix.
    pub fn restrict(&self, w: &SparseSym) -> DMatrix<f64> {
        match self {
            SdpFace::Block { support, .. } => {
                let idx: Vec<usize> = support.iter().copied().collect();
                w.restrict(&idx).to_dmatrix()
            }
            SdpFace::Basis { v, .. } => w.congruence(v),
        }
    }

    /// Same subspace (up to `tol` in projection distance).
    pub fn same_as(&self, other: &SdpFace, tol: f64) -> bool {
        if self.n() != other.n() || self.k() != other.k() {
            return false;
        }
        if let (Some(a), Some(b)) = (self.block_support(), other.block_support()) {
            return a == b;
        }
        let (a, b) = (self.basis(), other.basis());
        let resid = &b - &a * (a.transpose() * &b);
        resid.norm() <= tol * (1.0 + b.norm())
    }

    /// Face whose subspace is `range(V_1) ∩ range(V_2)`.
    pub fn intersect(&self, other: &SdpFace, tol: f64) -> SdpFace {
        if let (Some(a), Some(b)) = (self.block_support(), other.block_support()) {
            return SdpFace::Block {
                n: self.n(),
                support: a.intersection(b).copied().collect(),
            };
        }
        let (a, b) = (self.basis(), other.basis());
        // x = A s = B t  ⇔  [A, −B] (s, t) = 0.
        let mut stacked = DMatrix::zeros(a.nrows(), a.ncols() + b.ncols());
        stacked
            .view_mut((0, 0), (a.nrows(), a.ncols()))
            .copy_from(&a);
        stacked
            .view_mut((0, a.ncols()), (b.nrows(), b.ncols()))
            .copy_from(&(-&b));
        let null = null_space(&stacked, tol);
        let s = null.rows(0, a.ncols()).into_owned();
        SdpFace::from_basis(a * s, tol)
    }

    /// Smallest face containing both: the subspace `range(V_1) + range(V_2)`.
    pub fn join(&self, other: &SdpFace, tol: f64) -> SdpFace {
        if let (Some(a), Some(b)) = (self.block_support(), other.block_support()) {
            return SdpFace::Block {
                n: self.n(),
                support: a.union(b).copied().collect(),
            };
        }
        let (a, b) = (self.basis(), other.basis());
        let mut both = DMatrix::zeros(a.nrows(), a.ncols() + b.ncols());
        both.view_mut((0, 0), (a.nrows(), a.ncols())).copy_from(&a);
        both.view_mut((0, a.ncols()), (b.nrows(), b.ncols()))
            .copy_from(&b);
        SdpFace::from_basis(both, tol)
    }
}

/// Orthonormal basis of `range(v)` by modified Gram–Schmidt with one
/// reorthogonalization pass; columns whose remainder falls below `tol`
/// relative to their original norm are dropped.
pub fn orthonormalize(v: &DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    let mut cols: Vec<nalgebra::DVector<f64>> = Vec::new();
    for c in 0..v.ncols() {
        let mut x = v.column(c).into_owned();
        let norm0 = x.norm();
        if norm0 == 0.0 {
            continue;
        }
        for _ in 0..2 {
            for q in &cols {
                let d = q.dot(&x);
                x -= q * d;
            }
        }
        let nx = x.norm();
        if nx > tol.max(1e-12) * norm0 {
            cols.push(x / nx);
        }
    }
    let mut out = DMatrix::zeros(v.nrows(), cols.len());
    for (c, q) in cols.iter().enumerate() {
        out.set_column(c, q);
    }
    out
}

/// Orthonormal basis of the numerical null space of a general matrix.
fn null_space(m: &DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    let gram = m.transpose() * m;
    let eig =
        sym_eig(&SymMatrixF::from_dmatrix(&gram), DEFAULT_EIG_TOL).expect("finite gram matrix");
    let lmax = eig.eigenvalues.first().copied().unwrap_or(0.0).abs();
    let cut = tol * lmax.max(1.0);
    let keep: Vec<usize> = (0..eig.eigenvalues.len())
        .filter(|&k| eig.eigenvalues[k].abs() <= cut)
        .collect();
    eig.eigenvectors.select_columns(&keep)
}

/// Eigen-analysis of `Vᵀ W V` that respects block structure.
#[derive(Clone, Debug)]
pub struct RestrictedSpectrum {
    pub is_psd: bool,
    pub rank: usize,
    pub lambda_max: f64,
}

/// Spectrum of `Vᵀ W V`. On block faces the matrix is split into connected
/// components of its sparsity graph, so large diagonal-dominated faces stay
/// cheap.
pub fn restricted_spectrum(
    face: &SdpFace,
    w: &SparseSym,
    rank_tol: f64,
) -> Result<RestrictedSpectrum> {
    if !w.is_finite() {
        return Err(Error::NonFinite);
    }
    let eigs = match face {
        SdpFace::Block { support, .. } => {
            let idx: Vec<usize> = support.iter().copied().collect();
            let mut eigs = Vec::with_capacity(idx.len());
            for comp in w.components(&idx) {
                if comp.len() == 1 {
                    eigs.push(w.get(comp[0], comp[0]));
                } else {
                    let sub = SymMatrixF::from_dmatrix(&w.restrict(&comp).to_dmatrix());
                    eigs.extend(sym_eig(&sub, DEFAULT_EIG_TOL)?.eigenvalues);
                }
            }
            eigs
        }
        SdpFace::Basis { v, .. } => {
            let m = SymMatrixF::from_dmatrix(&w.congruence(v));
            sym_eig(&m, DEFAULT_EIG_TOL)?.eigenvalues
        }
    };
    let (is_psd, rank) = classify_spectrum(&eigs, rank_tol);
    let lambda_max = eigs.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    Ok(RestrictedSpectrum {
        is_psd,
        rank,
        lambda_max,
    })
}

/// Certificate `W = Σ A_i y_i` with `bᵀy = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct SdpExposingVector {
    pub y: Vec<f64>,
    pub w: SparseSym,
}

impl SdpExposingVector {
    pub fn from_multiplier(p: &SdpProblem, y: Vec<f64>) -> Self {
        let w = p.combine(&y);
        SdpExposingVector { y, w }
    }

    /// The certificate `A_i` itself.
    pub fn pick(p: &SdpProblem, i: usize) -> Self {
        let mut y = vec![0.0; p.m()];
        y[i] = 1.0;
        Self::from_multiplier(p, y)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExposingStatus {
    Valid,
    InPerp,
    NotPsdOnFace,
    NotInLperp,
}

/// Classifies `W` as an exposing vector for `L ∩ F`.
pub fn check_exposing_sdp(
    p: &SdpProblem,
    face: &SdpFace,
    e: &SdpExposingVector,
    tol: f64,
) -> Result<ExposingStatus> {
    Ok(check_with_rank(p, face, e, tol)?.0)
}

pub(crate) fn check_with_rank(
    p: &SdpProblem,
    face: &SdpFace,
    e: &SdpExposingVector,
    tol: f64,
) -> Result<(ExposingStatus, usize)> {
    if face.n() != p.n || e.w.order() != p.n || e.y.len() != p.m() {
        return Err(Error::DimensionMismatch(
            "certificate, face and problem disagree".into(),
        ));
    }
    let mut diff = p.combine(&e.y);
    diff.add_scaled(&e.w, -1.0);
    let scale = e.w.frobenius_norm().max(1.0);
    if diff.frobenius_norm() > tol.max(DEFAULT_EIG_TOL) * scale || p.b_dot(&e.y).abs() > tol {
        return Ok((ExposingStatus::NotInLperp, 0));
    }
    let spec = restricted_spectrum(face, &e.w, tol)?;
    if spec.rank == 0 {
        return Ok((ExposingStatus::InPerp, 0));
    }
    if !spec.is_psd {
        return Ok((ExposingStatus::NotPsdOnFace, spec.rank));
    }
    Ok((ExposingStatus::Valid, spec.rank))
}

/// `F ∩ W^⊥`: the new basis spans the null space of `Vᵀ W V`.
pub fn apply_fr_step(face: &SdpFace, e: &SdpExposingVector, tol: f64) -> Result<SdpFace> {
    let spec = restricted_spectrum(face, &e.w, tol)?;
    if !spec.is_psd || spec.rank == 0 {
        return Err(Error::PreconditionFailed(
            "W does not expose a proper face of F".into(),
        ));
    }
    let cut = tol * spec.lambda_max.max(1.0);
    let n = face.n();
    let next = match face {
        SdpFace::Block { support, .. } => {
            let idx: Vec<usize> = support.iter().copied().collect();
            let mut keep_coords = Vec::new();
            let mut dense_parts: Vec<(Vec<usize>, DMatrix<f64>)> = Vec::new();
            for comp in e.w.components(&idx) {
                if comp.len() == 1 {
                    if e.w.get(comp[0], comp[0]).abs() <= cut {
                        keep_coords.push(comp[0]);
                    }
                    continue;
                }
                let sub = SymMatrixF::from_dmatrix(&e.w.restrict(&comp).to_dmatrix());
                let eig = sym_eig(&sub, DEFAULT_EIG_TOL)?;
                let null: Vec<usize> = (0..comp.len())
                    .filter(|&k| eig.eigenvalues[k].abs() <= cut)
                    .collect();
                if !null.is_empty() {
                    dense_parts.push((comp, eig.eigenvectors.select_columns(&null)));
                }
            }
            if dense_parts.is_empty() {
                SdpFace::Block {
                    n,
                    support: keep_coords.into_iter().collect(),
                }
            } else {
                let cols =
                    keep_coords.len() + dense_parts.iter().map(|(_, b)| b.ncols()).sum::<usize>();
                let mut v = DMatrix::zeros(n, cols);
                let mut c = 0;
                for &i in &keep_coords {
                    v[(i, c)] = 1.0;
                    c += 1;
                }
                for (comp, b) in &dense_parts {
                    for k in 0..b.ncols() {
                        for (r, &i) in comp.iter().enumerate() {
                            v[(i, c)] = b[(r, k)];
                        }
                        c += 1;
                    }
                }
                SdpFace::from_basis(v, tol)
            }
        }
        SdpFace::Basis { v, .. } => {
            let m = SymMatrixF::from_dmatrix(&e.w.congruence(v));
            let eig = sym_eig(&m, DEFAULT_EIG_TOL)?;
            let null: Vec<usize> = (0..v.ncols())
                .filter(|&k| eig.eigenvalues[k].abs() <= cut)
                .collect();
            let nb = v * eig.eigenvectors.select_columns(&null);
            SdpFace::from_basis(nb, tol)
        }
    };
    if next.k() + spec.rank != face.k() {
        return Err(Error::PreconditionFailed(format!(
            "face dimension {} does not drop by rank {}",
            face.k(),
            spec.rank
        )));
    }
    Ok(next)
}

/// Whether `Σ A_i y_i` exposes a proper face of the full cone, and its rank.
pub fn rank_of_exposing(p: &SdpProblem, y: &[f64], rank_tol: f64) -> Result<(bool, usize)> {
    if y.len() != p.m() {
        return Err(Error::DimensionMismatch(format!(
            "y has length {} but m = {}",
            y.len(),
            p.m()
        )));
    }
    let e = SdpExposingVector::from_multiplier(p, y.to_vec());
    let (status, rank) = check_with_rank(p, &SdpFace::full(p.n), &e, rank_tol)?;
    Ok((status == ExposingStatus::Valid, rank))
}
