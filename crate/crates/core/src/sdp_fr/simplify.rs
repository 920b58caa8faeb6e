use crate::error::{Error, Result};
use crate::kernel::{Rational, RationalMatrix};
use crate::lp_fr::LinearSet;

use super::face::SdpFace;
use super::problem::SdpProblem;

/// Restricts every `A_i` to the block `S` of a block-diagonal face.
pub fn simplify_blockdiag(p: &SdpProblem, face: &SdpFace) -> Result<SdpProblem> {
    let support = face
        .block_support()
        .ok_or_else(|| Error::PreconditionFailed("face has no block support".into()))?;
    if face.n() != p.n {
        return Err(Error::DimensionMismatch(
            "face and problem orders differ".into(),
        ));
    }
    let idx: Vec<usize> = support.iter().copied().collect();
    if idx.is_empty() {
        return Err(Error::PreconditionFailed(
            "the zero face has no block to keep".into(),
        ));
    }
    let mats = p.mats.iter().map(|a| a.restrict(&idx)).collect();
    let mut out = SdpProblem::new(idx.len(), mats, p.b.clone())?;
    if let Some(labels) = &p.labels {
        out.labels = Some(idx.iter().map(|&i| labels[i]).collect());
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug)]
pub struct DiagonalOptions {
    /// Off-diagonal magnitudes up to this count as zero.
    pub tol: f64,
    /// Round entries within `1e-9` of an integer before the exact conversion.
    pub snap: bool,
}

impl Default for DiagonalOptions {
    fn default() -> Self {
        DiagonalOptions {
            tol: 0.0,
            snap: false,
        }
    }
}

/// The orthant system of a diagonal SDP.
#[derive(Clone, Debug)]
pub struct DiagonalLp {
    pub set: LinearSet,
    /// Original diagonal index behind each LP coordinate.
    pub kept: Vec<usize>,
}

fn exact(v: f64, snap: bool) -> Rational {
    let v = if snap && (v - v.round()).abs() <= 1e-9 {
        v.round()
    } else {
        v
    };
    Rational::from_f64_exact(v).expect("finite floats are dyadic rationals")
}

/// Rows `diag(A_i)` as exact rationals, with coordinates that vanish in every
/// row dropped (unless all do). `None` when some off-diagonal exceeds `tol`.
pub fn sdp_to_lp_if_diagonal(p: &SdpProblem, opts: DiagonalOptions) -> Option<DiagonalLp> {
    if p.mats.iter().any(|a| a.max_offdiag() > opts.tol) {
        return None;
    }
    let diags: Vec<Vec<Rational>> = p
        .mats
        .iter()
        .map(|a| {
            a.diagonal()
                .into_iter()
                .map(|v| exact(v, opts.snap))
                .collect()
        })
        .collect();
    let mut kept: Vec<usize> = (0..p.n)
        .filter(|&c| diags.iter().any(|row| !row[c].is_zero()))
        .collect();
    if kept.is_empty() {
        kept = (0..p.n).collect();
    }
    let rows = diags
        .iter()
        .map(|row| kept.iter().map(|&c| row[c].clone()).collect())
        .collect();
    let a = RationalMatrix::from_rows_with_cols(rows, kept.len());
    let b = p.b.iter().map(|&v| exact(v, opts.snap)).collect();
    let set = LinearSet::new(a, b).ok()?;
    Some(DiagonalLp { set, kept })
}
