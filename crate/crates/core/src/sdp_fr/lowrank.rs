//! Exposing vectors of prescribed rank via the factored system
//! `Σ y_i VᵀA_iV = UUᵀ`, `tr(Σ y_i VᵀA_iV) = 1`, `bᵀy = 0`, solved by
//! Levenberg–Marquardt.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::DEFAULT_RANK_TOL;

use super::face::{check_exposing_sdp, ExposingStatus, SdpExposingVector, SdpFace};
use super::problem::SdpProblem;
use super::sequence::FRSequenceSDP;

/// Iteration continues past `res_tol` down to this level: roots of this
/// system are typically singular, where the error in `y` scales like the
/// square root of the residual.
const POLISH_TOL: f64 = 1e-15;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LowRankOptions {
    /// Ranks tried at every face, in ascending order.
    pub ranks: Vec<usize>,
    /// Number of independent seeds per rank and face.
    pub seeds: usize,
    /// Initial points drawn in turn from each seed's stream.
    pub restarts: usize,
    pub base_seed: u64,
    pub max_iter: usize,
    pub res_tol: f64,
    pub rank_tol: f64,
}

impl Default for LowRankOptions {
    fn default() -> Self {
        LowRankOptions {
            ranks: vec![1],
            seeds: 8,
            restarts: 8,
            base_seed: 0,
            max_iter: 500,
            res_tol: 1e-10,
            rank_tol: DEFAULT_RANK_TOL,
        }
    }
}

#[derive(Clone, Debug)]
pub struct LowRankHit {
    pub y: Vec<f64>,
    /// `k × r` factor in face coordinates.
    pub u: DMatrix<f64>,
    pub residual: f64,
    pub iterations: usize,
}

struct Residual<'a> {
    blocks: Vec<DMatrix<f64>>,
    traces: Vec<f64>,
    b: &'a [f64],
    k: usize,
    r: usize,
}

impl Residual<'_> {
    fn m(&self) -> usize {
        self.blocks.len()
    }

    fn len(&self) -> usize {
        self.k * (self.k + 1) / 2 + 2
    }

    fn weight(a: usize, b: usize) -> f64 {
        if a == b {
            1.0
        } else {
            std::f64::consts::SQRT_2
        }
    }

    fn combination(&self, y: &[f64]) -> DMatrix<f64> {
        let mut s = DMatrix::zeros(self.k, self.k);
        for (bi, &yi) in self.blocks.iter().zip(y) {
            if yi != 0.0 {
                s += bi * yi;
            }
        }
        s
    }

    fn eval(&self, y: &[f64], u: &DMatrix<f64>) -> DVector<f64> {
        let s = self.combination(y) - u * u.transpose();
        let mut out = DVector::zeros(self.len());
        let mut row = 0;
        for a in 0..self.k {
            for b in a..self.k {
                out[row] = Self::weight(a, b) * s[(a, b)];
                row += 1;
            }
        }
        out[row] = self.traces.iter().zip(y).map(|(t, v)| t * v).sum::<f64>() - 1.0;
        out[row + 1] = self.b.iter().zip(y).map(|(t, v)| t * v).sum::<f64>();
        out
    }

    /// Jacobian with columns `(y, vec(U))`, `U` stored column-major.
    fn jacobian(&self, u: &DMatrix<f64>) -> DMatrix<f64> {
        let m = self.m();
        let mut j = DMatrix::zeros(self.len(), m + self.k * self.r);
        let mut row = 0;
        for a in 0..self.k {
            for b in a..self.k {
                let w = Self::weight(a, b);
                for (i, bi) in self.blocks.iter().enumerate() {
                    j[(row, i)] = w * bi[(a, b)];
                }
                for s in 0..self.r {
                    j[(row, m + s * self.k + a)] -= w * u[(b, s)];
                    j[(row, m + s * self.k + b)] -= w * u[(a, s)];
                }
                row += 1;
            }
        }
        for i in 0..m {
            j[(row, i)] = self.traces[i];
            j[(row + 1, i)] = self.b[i];
        }
        j
    }
}

/// Searches for `(y, U)` with `U` of rank at most `r` on the face `F`.
/// Returns `None` when Levenberg–Marquardt stalls before reaching `res_tol`
/// or when the result fails the exposing-vector check.
pub fn lowrank_exposing_search(
    p: &SdpProblem,
    face: &SdpFace,
    r: usize,
    seed: u64,
    max_iter: usize,
    res_tol: f64,
) -> Result<Option<LowRankHit>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    search_with_rng(p, face, r, &mut rng, 1, max_iter, res_tol, DEFAULT_RANK_TOL)
}

#[allow(clippy::too_many_arguments)]
fn search_with_rng(
    p: &SdpProblem,
    face: &SdpFace,
    r: usize,
    rng: &mut ChaCha8Rng,
    restarts: usize,
    max_iter: usize,
    res_tol: f64,
    rank_tol: f64,
) -> Result<Option<LowRankHit>> {
    let k = face.k();
    if r == 0 || r > k {
        return Err(Error::PreconditionFailed(format!(
            "rank {r} must lie in 1..={k}"
        )));
    }
    let blocks: Vec<DMatrix<f64>> = p.mats.iter().map(|a| face.restrict(a)).collect();
    let traces = blocks.iter().map(|b| b.trace()).collect();
    let res = Residual {
        blocks,
        traces,
        b: &p.b,
        k,
        r,
    };
    for _ in 0..restarts.max(1) {
        if let Some(hit) = levenberg_marquardt(p, face, &res, rng, max_iter, res_tol, rank_tol)? {
            return Ok(Some(hit));
        }
    }
    Ok(None)
}

fn levenberg_marquardt(
    p: &SdpProblem,
    face: &SdpFace,
    res: &Residual,
    rng: &mut ChaCha8Rng,
    max_iter: usize,
    res_tol: f64,
    rank_tol: f64,
) -> Result<Option<LowRankHit>> {
    let (k, r, m) = (res.k, res.r, res.m());
    let scale = 1.0 / ((k * r) as f64).sqrt();
    let mut u = DMatrix::from_fn(k, r, |_, _| {
        let z: f64 = StandardNormal.sample(rng);
        z * scale
    });
    // Least-squares y for the initial U.
    let jy = res.jacobian(&u).columns(0, m).into_owned();
    let mut target = -res.eval(&vec![0.0; m], &u);
    target
        .iter_mut()
        .for_each(|v| *v = if v.is_finite() { *v } else { 0.0 });
    let mut y: Vec<f64> = jy
        .svd(true, true)
        .solve(&target, 1e-12)
        .map(|v| v.iter().copied().collect())
        .unwrap_or_else(|_| vec![0.0; m]);

    let mut rvec = res.eval(&y, &u);
    let mut cost = rvec.norm_squared();
    let mut lambda = 1e-3;
    let mut iterations = 0;
    while iterations < max_iter && cost.sqrt() > POLISH_TOL {
        iterations += 1;
        let j = res.jacobian(&u);
        let g = j.transpose() * &rvec;
        let h = j.transpose() * &j;
        let mut accepted = false;
        while lambda < 1e16 {
            let mut damped = h.clone();
            for d in 0..damped.nrows() {
                damped[(d, d)] += lambda;
            }
            let Some(chol) = damped.cholesky() else {
                lambda *= 10.0;
                continue;
            };
            let step = chol.solve(&(-&g));
            let ny: Vec<f64> = (0..m).map(|i| y[i] + step[i]).collect();
            let nu = DMatrix::from_fn(k, r, |a, s| u[(a, s)] + step[m + s * k + a]);
            let nr = res.eval(&ny, &nu);
            let ncost = nr.norm_squared();
            if ncost.is_finite() && ncost < cost {
                y = ny;
                u = nu;
                rvec = nr;
                cost = ncost;
                lambda = (lambda / 10.0).max(1e-15);
                accepted = true;
                break;
            }
            lambda *= 10.0;
        }
        if !accepted {
            break;
        }
    }
    let residual = cost.sqrt();
    if residual > res_tol {
        return Ok(None);
    }
    let e = SdpExposingVector::from_multiplier(p, y.clone());
    if check_exposing_sdp(p, face, &e, rank_tol)? != ExposingStatus::Valid {
        return Ok(None);
    }
    Ok(Some(LowRankHit {
        y,
        u,
        residual,
        iterations,
    }))
}

/// Multi-start search: start `idx` uses seed `base_seed + idx` on stream
/// `stream`. The lowest successful start wins regardless of scheduling.
pub fn multistart_search(
    p: &SdpProblem,
    face: &SdpFace,
    r: usize,
    opts: &LowRankOptions,
    stream: u64,
) -> Result<Option<LowRankHit>> {
    let found = (0..opts.seeds as u64)
        .into_par_iter()
        .find_map_first(|idx| {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.base_seed.wrapping_add(idx));
            rng.set_stream(stream);
            match search_with_rng(
                p,
                face,
                r,
                &mut rng,
                opts.restarts,
                opts.max_iter,
                opts.res_tol,
                opts.rank_tol,
            ) {
                Ok(Some(hit)) => Some(Ok(hit)),
                Ok(None) => None,
                Err(e) => Some(Err(e)),
            }
        });
    found.transpose()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Termination {
    /// The face collapsed to `{0}`.
    ZeroFace,
    /// No start found an exposing vector at any scheduled rank. This does
    /// not certify that none exists.
    SearchExhausted,
}

#[derive(Clone, Debug)]
pub struct LowRankRun {
    pub seq: FRSequenceSDP,
    pub termination: Termination,
    /// Final residual of the search behind each step.
    pub residuals: Vec<f64>,
    /// Factor rank `r` used at each step.
    pub ranks: Vec<usize>,
}

/// Greedy facial reduction driven by the low-rank search.
pub fn fra_lowrank(p: &SdpProblem, opts: &LowRankOptions) -> Result<LowRankRun> {
    let mut ranks = opts.ranks.clone();
    ranks.sort_unstable();
    ranks.dedup();
    if ranks.first() == Some(&0) {
        return Err(Error::PreconditionFailed("ranks must be positive".into()));
    }
    let mut seq = FRSequenceSDP::empty(SdpFace::full(p.n));
    let mut residuals = Vec::new();
    let mut used = Vec::new();
    loop {
        let face = seq.final_face().clone();
        if face.k() == 0 {
            return Ok(LowRankRun {
                seq,
                termination: Termination::ZeroFace,
                residuals,
                ranks: used,
            });
        }
        let mut hit = None;
        for &r in ranks.iter().filter(|&&r| r <= face.k()) {
            let stream = (seq.len() as u64) << 16 | r as u64;
            if let Some(h) = multistart_search(p, &face, r, opts, stream)? {
                hit = Some((h, r));
                break;
            }
        }
        let Some((h, r)) = hit else {
            return Ok(LowRankRun {
                seq,
                termination: Termination::SearchExhausted,
                residuals,
                ranks: used,
            });
        };
        residuals.push(h.residual);
        used.push(r);
        let e = SdpExposingVector::from_multiplier(p, h.y);
        let next = super::face::apply_fr_step(&face, &e, opts.rank_tol)?;
        seq.steps.push(e);
        seq.faces.push(next);
    }
}
