//! Seeded property checks shared by the acceptance suite and the proptest
//! targets. Each check draws its fixture from `ChaCha8Rng::seed_from_u64(seed)`
//! and returns a description of the first violation.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;
use std::process::Command;

use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use frkit::kernel::{
    dot, lp_solve, psd_rank, sym_eig, LpOutcome, LpTask, Rational, RationalMatrix, SymMatrixF,
    DEFAULT_EIG_TOL, DEFAULT_RANK_TOL,
};
use frkit::lp_fr::{
    brute_force_explore, brute_force_msd, duplicated_block_matrix, find_minimal_exposing,
    fra_minimal, fra_minimal_ordered, is_minimal_step, match_matrix_lp, msd_lp,
    msd_upper_bound_blocks, random_feasible_lp, remove_variable, sd_lp, swap_steps,
    verify_sequence_lp, FRSequenceLP, LinearSet, LpExposingVector, OrthantFace, RemovalCase,
};
use frkit::sat_reduce::{
    assignment_to_sequence, brute_force_sat, build_msd_sdp, certify, duplicate_clauses,
    enumerate_three_variable_cnfs, exact_msd_detail, match_matrix, random_preprocessed_satisfiable,
    reduced_lp_for_assignment, Assignment, CnfInstance, ReductionInstance,
};
use frkit::sdp_fr::{
    apply_fr_step, fra_lowrank, notminex, rank_of_exposing, sdp_to_lp_if_diagonal, sdpex2,
    simplify_blockdiag, verify_sequence_sdp, worst_case_instance, DiagonalOptions, FRSequenceSDP,
    LowRankOptions, SdpExposingVector, SdpFace, SdpProblem, SparseSym,
};
use frkit::Error;

pub const TOL: f64 = DEFAULT_RANK_TOL;

#[derive(Debug)]
pub struct Failure(pub String);

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(format!("unexpected error: {e}"))
    }
}

pub type Check = Result<(), Failure>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {{
        let ok: bool = $cond;
        if !ok {
            return Err(Failure(format!($($fmt)+)));
        }
    }};
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn q(v: i64) -> Rational {
    Rational::from_integer(v)
}

fn int_row<R: Rng>(rng: &mut R, n: usize, lo: i64, hi: i64) -> Vec<Rational> {
    (0..n).map(|_| q(rng.random_range(lo..=hi))).collect()
}

// ---------------------------------------------------------------- kernel

/// Every returned optimal point satisfies each constraint exactly.
pub fn kernel_simplex_exact(seed: u64) -> Check {
    let mut rng = rng(seed);
    let n = rng.random_range(1..=4);
    let me = rng.random_range(0..=2);
    let mi = rng.random_range(0..=3);
    let task = LpTask {
        objective: int_row(&mut rng, n, -3, 3),
        equalities: (0..me)
            .map(|_| (int_row(&mut rng, n, -3, 3), q(rng.random_range(-3..=3))))
            .collect(),
        inequalities_geq: (0..mi)
            .map(|_| (int_row(&mut rng, n, -3, 3), q(rng.random_range(-3..=3))))
            .collect(),
        num_vars: n,
    };
    if let LpOutcome::Optimal { value, point } = lp_solve(&task)? {
        ensure!(
            point.len() == n,
            "point has {} coordinates for {n} variables",
            point.len()
        );
        for (a, b) in &task.equalities {
            ensure!(dot(a, &point) == *b, "equality violated at {point:?}");
        }
        for (a, b) in &task.inequalities_geq {
            ensure!(dot(a, &point) >= *b, "inequality violated at {point:?}");
        }
        ensure!(
            dot(&task.objective, &point) == value,
            "reported value differs from cᵀx"
        );
    }
    Ok(())
}

/// Primal `max cᵀx, Ax ≤ b, x ≥ 0` and dual `min bᵀy, Aᵀy ≥ c, y ≥ 0` agree.
pub fn kernel_duality(seed: u64) -> Check {
    let mut rng = rng(seed);
    let n = rng.random_range(1..=4);
    let m = rng.random_range(1..=3);
    let a: Vec<Vec<i64>> = (0..m)
        .map(|_| (0..n).map(|_| rng.random_range(-3..=3)).collect())
        .collect();
    let b: Vec<i64> = (0..m).map(|_| rng.random_range(0..=4)).collect();
    let c: Vec<i64> = (0..n).map(|_| rng.random_range(-3..=3)).collect();
    let unit = |k: usize, len: usize| -> Vec<Rational> {
        (0..len).map(|i| q(i64::from(i == k))).collect()
    };
    let mut primal = LpTask {
        objective: c.iter().map(|&v| q(v)).collect(),
        num_vars: n,
        ..Default::default()
    };
    for (row, &bi) in a.iter().zip(&b) {
        primal
            .inequalities_geq
            .push((row.iter().map(|&v| q(-v)).collect(), q(-bi)));
    }
    primal
        .inequalities_geq
        .extend((0..n).map(|j| (unit(j, n), q(0))));
    let mut dual = LpTask {
        objective: b.iter().map(|&v| q(-v)).collect(),
        num_vars: m,
        ..Default::default()
    };
    for j in 0..n {
        dual.inequalities_geq
            .push(((0..m).map(|i| q(a[i][j])).collect(), q(c[j])));
    }
    dual.inequalities_geq
        .extend((0..m).map(|i| (unit(i, m), q(0))));
    let p = lp_solve(&primal)?;
    let d = lp_solve(&dual)?;
    ensure!(
        !matches!(p, LpOutcome::Infeasible),
        "x = 0 is primal feasible"
    );
    if let (LpOutcome::Optimal { value: pv, .. }, LpOutcome::Optimal { value: dv, .. }) = (&p, &d) {
        ensure!(
            *pv == -dv.clone(),
            "primal {pv} and dual {} differ",
            -dv.clone()
        );
    }
    Ok(())
}

/// Reconstruction and orthonormality of a random symmetric matrix of order ≤ 12.
pub fn kernel_eig(seed: u64) -> Check {
    let mut rng = rng(seed);
    let n = rng.random_range(1..=12);
    let mut m = SymMatrixF::zeros(n);
    for i in 0..n {
        for j in i..n {
            m.set(i, j, rng.random_range(-10.0..10.0));
        }
    }
    let e = sym_eig(&m, DEFAULT_EIG_TOL)?;
    let scale = m.frobenius_norm().max(1.0);
    ensure!(
        e.reconstruction_error(&m) <= DEFAULT_EIG_TOL * scale,
        "reconstruction error too large"
    );
    ensure!(
        e.orthonormality_error() <= DEFAULT_EIG_TOL,
        "eigenvectors not orthonormal"
    );
    Ok(())
}

/// The PSD verdict and rank survive scaling by 10^−6 and 10^6.
pub fn kernel_psd_scale(seed: u64) -> Check {
    let mut rng = rng(seed);
    let n = rng.random_range(2..=8);
    let spectrum: Vec<f64> = (0..n)
        .map(|_| [-1.0, 0.0, 1.0, 2.0, 4.0][rng.random_range(0..5)])
        .collect();
    let g = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
    let qm = g.qr().q();
    let m = SymMatrixF::from_dmatrix(
        &(&qm * DMatrix::from_diagonal(&DVector::from_vec(spectrum.clone())) * qm.transpose()),
    );
    let base = psd_rank(&m, TOL)?;
    let expected = (
        spectrum.iter().all(|&v| v >= 0.0),
        spectrum.iter().filter(|&&v| v != 0.0).count(),
    );
    ensure!(
        base == expected,
        "psd_rank {base:?}, spectrum says {expected:?}"
    );
    for c in [1e-6, 1.0, 1e6] {
        ensure!(
            psd_rank(&m.scaled(c), TOL)? == base,
            "verdict changes under scaling by {c}"
        );
    }
    Ok(())
}

// ---------------------------------------------------------------- lp_fr

pub fn random_lp(seed: u64) -> LinearSet {
    random_feasible_lp(&mut rng(seed), 8, 4)
}

fn full(set: &LinearSet) -> OrthantFace {
    OrthantFace::full(set.n())
}

/// Identity, reversal, then seeded shuffles.
pub fn tie_break_orders(n: usize, seed: u64, count: usize) -> Vec<Vec<usize>> {
    let mut rng = rng(seed ^ 0x5eed);
    let mut out = vec![(0..n).collect::<Vec<_>>(), (0..n).rev().collect()];
    while out.len() < count {
        let mut p: Vec<usize> = (0..n).collect();
        p.shuffle(&mut rng);
        out.push(p);
    }
    out.truncate(count);
    out
}

/// Every tie-break order gives a minimal sequence of the brute-force length.
pub fn lp_main_theorem(seed: u64) -> Check {
    let set = random_lp(seed);
    let brute = brute_force_msd(&set, 12)?;
    for order in tie_break_orders(set.n(), seed, 10) {
        let seq = fra_minimal_ordered(&set, &full(&set), Some(&order))?;
        ensure!(
            seq.len() == brute,
            "order {order:?}: length {} but brute force {brute}",
            seq.len()
        );
        let rep = verify_sequence_lp(&set, &seq)?;
        ensure!(
            rep.valid && rep.minimal,
            "order {order:?}: sequence fails verification"
        );
    }
    Ok(())
}

/// Every step on a chain of maximum length is minimal.
pub fn lp_longest_is_minimal(seed: u64) -> Check {
    let set = random_lp(seed);
    let ex = brute_force_explore(&set, 12)?;
    for (face, w) in ex.longest_chain_steps(&set) {
        ensure!(
            is_minimal_step(&set, &face, &w)?,
            "non-minimal step from face {:?} on a longest chain",
            face.zero_set()
        );
    }
    Ok(())
}

fn sequence_from_step(set: &LinearSet, w: LpExposingVector) -> Result<FRSequenceLP, Failure> {
    let start = full(set);
    let exposed = w.check(set, &start).map_err(Failure)?;
    let next = start.with_zeros(exposed);
    Ok(FRSequenceLP {
        steps: vec![w],
        faces: vec![start, next],
    })
}

/// Sequences from every operation pass verification.
pub fn lp_soundness(seed: u64) -> Check {
    let set = random_lp(seed);
    let seq = fra_minimal(&set, &full(&set))?;
    ensure!(
        verify_sequence_lp(&set, &seq)?.valid,
        "greedy sequence invalid"
    );
    if let (1, Some(w)) = sd_lp(&set)? {
        let one = sequence_from_step(&set, w)?;
        ensure!(
            verify_sequence_lp(&set, &one)?.valid,
            "singularity-degree step invalid"
        );
    }
    for j in 0..seq.len().saturating_sub(1) {
        if let Ok(s) = swap_steps(&set, &seq, j) {
            ensure!(verify_sequence_lp(&set, &s)?.valid, "swap at {j} invalid");
        }
    }
    for &var in seq.final_face().zero_set().iter().filter(|_| set.n() > 1) {
        let out = remove_variable(&set, &seq, var)?;
        ensure!(
            verify_sequence_lp(&out.set, &out.seq)?.valid,
            "removal of {var} invalid"
        );
    }
    Ok(())
}

/// A successful swap keeps length and minimality and changes only the face
/// between the swapped steps, which becomes `F_j` with the later block zeroed.
pub fn lp_swap_contract(seed: u64) -> Check {
    let set = random_lp(seed);
    let seq = fra_minimal(&set, &full(&set))?;
    for j in 0..seq.len().saturating_sub(1) {
        match swap_steps(&set, &seq, j) {
            Ok(s) => {
                ensure!(s.len() == seq.len(), "swap at {j} changes the length");
                let rep = verify_sequence_lp(&set, &s)?;
                ensure!(
                    rep.valid && rep.minimal,
                    "swap at {j} is not a minimal sequence"
                );
                for (i, (a, b)) in s.faces.iter().zip(&seq.faces).enumerate() {
                    if i != j + 1 {
                        ensure!(a == b, "swap at {j} changes face {i}");
                    }
                }
                let expected = seq.faces[j].with_zeros(seq.block(j + 1));
                ensure!(
                    s.faces[j + 1] == expected,
                    "swap at {j}: middle face differs"
                );
            }
            Err(Error::PreconditionFailed(_)) => {}
            Err(e) => return Err(e.into()),
        }
    }
    Ok(())
}

/// Removal keeps minimality when the variable shared its step; otherwise the
/// step disappears and minimality holds exactly when `e_var ∈ L^⊥`.
pub fn lp_removal_contract(seed: u64) -> Check {
    let set = random_lp(seed);
    let seq = fra_minimal(&set, &full(&set))?;
    for &var in seq.final_face().zero_set().iter().filter(|_| set.n() > 1) {
        let k = (0..seq.len())
            .find(|&k| seq.block(k).contains(&var))
            .ok_or_else(|| Failure(format!("{var} in no block")))?;
        let single = seq.block(k).len() == 1;
        let out = remove_variable(&set, &seq, var)?;
        let rep = verify_sequence_lp(&out.set, &out.seq)?;
        ensure!(rep.valid, "removal of {var} invalid");
        match out.case {
            RemovalCase::Two => {
                ensure!(!single, "case two reported for a singleton block");
                ensure!(
                    rep.minimal && out.seq.len() == seq.len(),
                    "case two breaks minimality or length"
                );
            }
            RemovalCase::One => {
                ensure!(single, "case one reported for a shared block");
                ensure!(
                    out.seq.len() + 1 == seq.len(),
                    "case one must drop exactly one step"
                );
                ensure!(
                    out.minimal_out == rep.minimal,
                    "minimal_out disagrees with verification"
                );
                ensure!(
                    out.minimal_out == set.unit_in_perp(var),
                    "minimal_out disagrees with e_var ∈ L^⊥"
                );
            }
        }
    }
    Ok(())
}

/// A minimal exposing vector on the full orthant is the only direction of
/// `L^⊥` supported inside its support.
pub fn lp_sdpminunique(seed: u64) -> Check {
    let set = random_lp(seed);
    let Some(w) = find_minimal_exposing(&set, &full(&set))? else {
        return Ok(());
    };
    let supp: Vec<usize> = (0..set.n()).filter(|&i| !w.w[i].is_zero()).collect();
    let mut rows = vec![set.b().to_vec()];
    rows.extend(
        (0..set.n())
            .filter(|i| !supp.contains(i))
            .map(|i| set.a().column(i)),
    );
    let ys = RationalMatrix::from_rows_with_cols(rows, set.m()).nullspace();
    let ds: Vec<Vec<Rational>> = ys
        .iter()
        .map(|y| set.a().transpose_mul_vec(y))
        .filter(|d| d.iter().any(|v| !v.is_zero()))
        .collect();
    ensure!(!ds.is_empty(), "w itself lies in the subspace");
    let k = supp[0];
    for d in ds {
        ensure!(!d[k].is_zero(), "d vanishes where w does not");
        let alpha = w.w[k].clone() / d[k].clone();
        for (i, (wi, di)) in w.w.iter().zip(&d).enumerate() {
            ensure!(
                *wi == alpha.clone() * di.clone(),
                "w is not a multiple of d at {i}"
            );
        }
    }
    Ok(())
}

/// Brute-force MSD of the duplicated incidence system never exceeds the bound.
pub fn lp_upper_bound(seed: u64) -> Check {
    let mut rng = rng(seed);
    for _ in 0..1000 {
        let q_tilde = rng.random_range(1..=3);
        let p = rng.random_range(1..=4);
        let dup = 2 * q_tilde;
        let columns: Vec<Vec<bool>> = (0..q_tilde)
            .map(|_| {
                let density = rng.random_range(0.0..1.0);
                (0..p).map(|_| rng.random_bool(density)).collect()
            })
            .collect();
        let ones: usize = columns.iter().flatten().filter(|&&b| b).count();
        if ones == 0 || ones * dup > 12 {
            continue;
        }
        let bound = match msd_upper_bound_blocks(&columns, dup) {
            Ok(b) => b,
            Err(Error::NotApplicable(_)) => continue,
            Err(e) => return Err(e.into()),
        };
        let set = match_matrix_lp(&duplicated_block_matrix(&columns, dup)).set;
        let brute = brute_force_msd(&set, 12)?;
        ensure!(
            brute <= bound,
            "columns {columns:?}: brute force {brute} exceeds bound {bound}"
        );
        return Ok(());
    }
    Ok(())
}

// ---------------------------------------------------------------- sdp_fr

pub fn diagonal_sdp(set: &LinearSet) -> SdpProblem {
    let mats = (0..set.m())
        .map(|i| {
            SparseSym::diag(
                &set.a()
                    .row(i)
                    .iter()
                    .map(Rational::to_f64)
                    .collect::<Vec<_>>(),
            )
        })
        .collect();
    let b = set.b().iter().map(Rational::to_f64).collect();
    SdpProblem::new(set.n(), mats, b).expect("consistent data")
}

fn strictly_shrinking(seq: &FRSequenceSDP, n: usize) -> Check {
    ensure!(seq.len() <= n, "length {} exceeds order {n}", seq.len());
    for (i, w) in seq.faces.windows(2).enumerate() {
        ensure!(
            w[1].k() < w[0].k(),
            "face dimension does not drop at step {i}"
        );
    }
    Ok(())
}

/// Low-rank runs verify and shrink the face at every step.
pub fn sdp_chain_soundness(seed: u64) -> Check {
    let p = match seed % 4 {
        0 => worst_case_instance(3 + (seed / 4 % 4) as usize)?,
        1 => notminex(),
        2 => sdpex2(),
        _ => diagonal_sdp(&random_feasible_lp(&mut rng(seed), 6, 3)),
    };
    let opts = LowRankOptions {
        ranks: vec![1, 2],
        seeds: 2,
        restarts: 4,
        base_seed: seed,
        ..LowRankOptions::default()
    };
    let run = fra_lowrank(&p, &opts)?;
    let rep = verify_sequence_sdp(&p, &run.seq, TOL)?;
    ensure!(rep.valid, "low-rank sequence fails verification");
    strictly_shrinking(&run.seq, p.n)
}

/// On diagonal instances a rank-one drop is a singleton, minimal LP step.
pub fn sdp_dim1_on_diagonal(seed: u64) -> Check {
    let set = random_feasible_lp(&mut rng(seed), 6, 3);
    let sdp = diagonal_sdp(&set);
    let dl = sdp_to_lp_if_diagonal(&sdp, DiagonalOptions::default())
        .ok_or_else(|| Failure("diagonal instance not recognized".into()))?;
    let lp_seq = fra_minimal(&set, &full(&set))?;
    let steps = lp_seq
        .steps
        .iter()
        .map(|s| {
            SdpExposingVector::from_multiplier(&sdp, s.y.iter().map(Rational::to_f64).collect())
        })
        .collect();
    let seq = FRSequenceSDP::from_steps(SdpFace::full(sdp.n), steps, TOL)?;
    let rep = verify_sequence_sdp(&sdp, &seq, TOL)?;
    ensure!(rep.valid, "mapped sequence fails verification");
    strictly_shrinking(&seq, sdp.n)?;
    for (i, &drop) in rep.rank_drops.iter().enumerate() {
        if drop != 1 {
            continue;
        }
        let support = seq.faces[i]
            .block_support()
            .ok_or_else(|| Failure(format!("face {i} of a diagonal chain has no block support")))?;
        let zeros = (0..dl.kept.len()).filter(|&c| !support.contains(&dl.kept[c]));
        let face = OrthantFace::new(dl.set.n(), zeros)?;
        let w = LpExposingVector::from_multiplier(&dl.set, lp_seq.steps[i].y.clone());
        let exposed = w.check(&dl.set, &face).map_err(Failure)?;
        ensure!(
            exposed.len() == 1,
            "rank drop 1 but {} indices exposed at step {i}",
            exposed.len()
        );
        ensure!(
            is_minimal_step(&dl.set, &face, &w)?,
            "singleton step {i} not minimal"
        );
    }
    Ok(())
}

/// Restricting a diagonal instance to a block face preserves the MSD.
pub fn sdp_simplify_preserves_msd(seed: u64) -> Check {
    let mut rng = rng(seed);
    let n = rng.random_range(2..=7);
    let m = rng.random_range(1..=3);
    let mut keep: BTreeSet<usize> = (0..n).filter(|_| rng.random_bool(0.6)).collect();
    if keep.is_empty() {
        keep.insert(rng.random_range(0..n));
    }
    // Nonnegative rows force coordinates to zero, so the MSD is rarely 0.
    let a: Vec<Vec<i64>> = (0..m)
        .map(|_| {
            let lo = if rng.random_bool(0.5) { 0 } else { -2 };
            (0..n).map(|_| rng.random_range(lo..=2)).collect()
        })
        .collect();
    let x0: Vec<i64> = (0..n)
        .map(|i| {
            if keep.contains(&i) && rng.random_bool(0.5) {
                rng.random_range(1..=2)
            } else {
                0
            }
        })
        .collect();
    let b: Vec<i64> = a
        .iter()
        .map(|r| r.iter().zip(&x0).map(|(u, v)| u * v).sum())
        .collect();
    let set = LinearSet::from_i64(&a, &b)?;
    let sdp = diagonal_sdp(&set);
    let zeros = (0..n).filter(|i| !keep.contains(i));
    let before = fra_minimal(&set, &OrthantFace::new(n, zeros)?)?.len();
    let small = simplify_blockdiag(&sdp, &SdpFace::block(n, keep.iter().copied())?)?;
    let dl = sdp_to_lp_if_diagonal(&small, DiagonalOptions::default())
        .ok_or_else(|| Failure("restriction is not diagonal".into()))?;
    let after = msd_lp(&dl.set)?;
    ensure!(
        before == after,
        "MSD {before} on the face but {after} after restriction"
    );
    ensure!(
        brute_force_msd(&dl.set, 12)? == after,
        "restricted MSD disagrees with brute force"
    );
    Ok(())
}

/// The orthant join property fails on the PSD cone: two faces whose join is
/// the whole cone, cut by the face exposed by the all-ones matrix, join to a
/// strictly smaller face than the cut.
pub fn sdp_psd_counterexample() -> Check {
    let tol = 1e-10;
    let g1 = SdpFace::block(3, [0, 1])?;
    let g2 = SdpFace::block(3, [2])?;
    ensure!(
        g1.join(&g2, tol).k() == 3,
        "G¹ ∨ G² should be the whole cone"
    );
    let ones = SparseSym::from_triplets(
        3,
        &[
            (0, 0, 1.0),
            (0, 1, 1.0),
            (0, 2, 1.0),
            (1, 1, 1.0),
            (1, 2, 1.0),
            (2, 2, 1.0),
        ],
    )?;
    let p = SdpProblem::new(3, vec![ones], vec![0.0])?;
    let f = apply_fr_step(&SdpFace::full(3), &SdpExposingVector::pick(&p, 0), TOL)?;
    ensure!(
        f.k() == 2,
        "all-ones matrix exposes a face of dimension {}",
        f.k()
    );
    let h1 = g1.intersect(&f, tol);
    let h2 = g2.intersect(&f, tol);
    ensure!(
        (h1.k(), h2.k()) == (1, 0),
        "intersections have dimensions ({}, {})",
        h1.k(),
        h2.k()
    );
    let joined = h1.join(&h2, tol).k();
    ensure!(
        joined < f.k(),
        "join of dimension {joined} is not smaller than {}",
        f.k()
    );
    Ok(())
}

/// `(label, y, expected rank)` for the minimum-rank table of the five-by-five
/// instance. `A1 + αA2 + βA3` has the 2×2 block `[[1, α], [α, α + β]]` on
/// coordinates 3, 4, singular exactly at `α² − α − β = 0`.
pub fn rank_table_samples() -> Vec<(String, Vec<f64>, usize)> {
    let mut rows = vec![("A3".to_string(), vec![0.0, 0.0, 1.0], 2)];
    for alpha in [0.0, 1.0] {
        rows.push((format!("A1 + {alpha}·A2"), vec![1.0, alpha, 0.0], 3));
    }
    rows.push(("A1 + 0.5·A2".to_string(), vec![1.0, 0.5, 0.0], 4));
    for beta in [1.0f64, 2.0] {
        let r = (1.0 + 4.0 * beta).sqrt();
        for alpha in [(1.0 - r) / 2.0, (1.0 + r) / 2.0] {
            rows.push((
                format!("A1 + {alpha:.6}·A2 + {beta}·A3"),
                vec![1.0, alpha, beta],
                4,
            ));
        }
        rows.push((format!("A1 + 0.5·A2 + {beta}·A3"), vec![1.0, 0.5, beta], 5));
    }
    rows
}

pub fn sdp_rank_table() -> Check {
    let p = sdpex2();
    for (label, y, expected) in rank_table_samples() {
        let (valid, rank) = rank_of_exposing(&p, &y, TOL)?;
        ensure!(valid, "{label} is not an exposing vector");
        ensure!(
            rank == expected,
            "{label}: rank {rank}, expected {expected}"
        );
    }
    Ok(())
}

// ---------------------------------------------------------------- sat_reduce

/// A preprocessed satisfiable CNF, duplicated when `dup` holds.
pub fn sat_fixture(
    seed: u64,
    p_max: usize,
    q_max: usize,
    dup: bool,
) -> Result<CnfInstance, Failure> {
    let cnf = random_preprocessed_satisfiable(&mut rng(seed), p_max, q_max);
    Ok(if dup { duplicate_clauses(&cnf)? } else { cnf })
}

/// `+1` when `u_i` occurs positively in clause `j` (1-based), `−1` negatively.
fn sign_in(r: &ReductionInstance, i: i64, j: i64) -> i32 {
    r.clauses[j as usize - 1]
        .iter()
        .find(|l| i64::from(l.unsigned_abs()) == i)
        .map_or(0, |l| l.signum())
}

/// Entry `(x, y)` of `Σ y_k A_k` computed from the labels alone.
fn expected_entry(r: &ReductionInstance, y: &[f64], x: usize, z: usize) -> f64 {
    let p = r.p;
    let labels = &r.universe.triples;
    let (a, b) = (labels[x], labels[z]);
    let clause = |j: i64| y[2 * p + j as usize - 1];
    if x == z {
        let [i, j, k] = a;
        return match k {
            1 if sign_in(r, i, j) > 0 => y[i as usize - 1] + clause(j),
            1 => y[p + i as usize - 1] + clause(j),
            2 => y[i as usize - 1] + y[p + i as usize - 1],
            _ => 0.0,
        };
    }
    let (t, s) = if a == [0, 0, 0] { (b, a) } else { (a, b) };
    if s == [0, 0, 0] && t[2] == 2 {
        clause(t[1])
    } else {
        0.0
    }
}

fn random_reduction(seed: u64) -> Result<ReductionInstance, Failure> {
    Ok(build_msd_sdp(&sat_fixture(seed, 5, 3, seed % 2 == 1)?)?)
}

/// Sizes, labels and every matrix entry match the construction.
pub fn sat_generator_invariants(seed: u64) -> Check {
    let r = random_reduction(seed)?;
    let (n, m) = (r.sdp.n, r.sdp.m());
    ensure!(n == 6 * r.q + 1, "n = {n} for q = {}", r.q);
    ensure!(m == 2 * r.p + r.q, "m = {m} for p = {}, q = {}", r.p, r.q);
    ensure!(r.d == r.p + r.q, "d = {} ≠ p + q", r.d);
    ensure!(r.sdp.b.iter().all(|&v| v == 0.0), "b ≠ 0");
    ensure!(
        r.universe.triples.last() == Some(&[0, 0, 0]),
        "sentinel not last"
    );
    let mut expected_labels = Vec::new();
    for k in 1..=2 {
        for (j, c) in r.clauses.iter().enumerate() {
            let mut vars: Vec<i64> = c.iter().map(|l| i64::from(l.unsigned_abs())).collect();
            vars.sort_unstable();
            expected_labels.extend(vars.into_iter().map(|i| [i, j as i64 + 1, k]));
        }
    }
    expected_labels.push([0, 0, 0]);
    ensure!(
        r.universe.triples == expected_labels,
        "labels differ from the incidence set"
    );
    ensure!(
        r.sdp.labels.as_ref() == Some(&expected_labels),
        "problem labels differ"
    );
    for (kk, a) in r.sdp.mats.iter().enumerate() {
        for (_, _, v) in a.iter() {
            ensure!(v == 0.0 || v == 1.0, "A_{} has entry {v}", kk + 1);
        }
        let mut y = vec![0.0; m];
        y[kk] = 1.0;
        for x in 0..n {
            for z in x..n {
                let want = expected_entry(&r, &y, x, z);
                ensure!(
                    a.get(x, z) == want,
                    "A_{} entry ({x}, {z}) is {} not {want}",
                    kk + 1,
                    a.get(x, z)
                );
            }
        }
    }
    Ok(())
}

/// `Σ y_k A_k` vanishes outside the diagonal and the sentinel links, with the
/// displayed values on them.
pub fn sat_sparsity_law(seed: u64) -> Check {
    let r = random_reduction(seed)?;
    let mut g = rng(seed ^ 0xabcd);
    let y: Vec<f64> = (0..r.sdp.m())
        .map(|_| f64::from(g.random_range(-4i32..=4)))
        .collect();
    let w = r.sdp.combine(&y);
    for x in 0..r.sdp.n {
        for z in x..r.sdp.n {
            let want = expected_entry(&r, &y, x, z);
            ensure!(
                w.get(x, z) == want,
                "W({x}, {z}) = {} but the pattern gives {want}",
                w.get(x, z)
            );
        }
    }
    Ok(())
}

fn satisfying(cnf: &CnfInstance) -> Vec<Assignment> {
    (0..1u64 << cnf.p)
        .map(|mask| Assignment::from_mask(cnf.p, mask))
        .filter(|a| a.satisfies(cnf))
        .collect()
}

/// Induced faces are block faces whose supports follow the zero diagonal of
/// each step, ending at the sentinel alone.
pub fn sat_block_diagonal_law(seed: u64) -> Check {
    let cnf = sat_fixture(seed, 5, 3, false)?;
    let r = build_msd_sdp(&cnf)?;
    for a in satisfying(&cnf) {
        let seq = assignment_to_sequence(&r, &a)?;
        let mut s: BTreeSet<usize> = (0..r.sdp.n).collect();
        for (k, face) in seq.faces.iter().enumerate() {
            if k > 0 {
                let w = &seq.steps[k - 1].w;
                s.retain(|&x| w.get(x, x) == 0.0);
            }
            ensure!(
                face.block_support() == Some(&s),
                "assignment {a}: face {k} is not the expected block"
            );
        }
        ensure!(
            s.iter().copied().collect::<Vec<_>>() == vec![r.universe.sentinel()],
            "assignment {a}: final support is not the sentinel"
        );
    }
    Ok(())
}

/// Every satisfying assignment induces a valid sequence of length `p + q`.
pub fn sat_forward_soundness(seed: u64) -> Check {
    let cnf = sat_fixture(seed, 5, 3, seed.is_multiple_of(3))?;
    let r = build_msd_sdp(&cnf)?;
    let all = satisfying(&cnf);
    ensure!(!all.is_empty(), "fixture is satisfiable");
    for a in all {
        let seq = assignment_to_sequence(&r, &a)?;
        let rep = verify_sequence_sdp(&r.sdp, &seq, TOL)?;
        ensure!(rep.valid, "assignment {a}: sequence invalid");
        ensure!(
            rep.length == r.p + r.q,
            "assignment {a}: length {} ≠ p + q",
            rep.length
        );
    }
    Ok(())
}

/// `(msd ≥ d)` agrees with brute-force satisfiability.
pub fn sat_equivalence(cnf: &CnfInstance, budget: u64) -> Check {
    let rep = certify(cnf, budget)?;
    let sat = brute_force_sat(cnf, budget)?.is_some();
    ensure!(
        (rep.msd >= rep.d) == sat,
        "msd {} vs d {} but satisfiable = {sat}",
        rep.msd,
        rep.d
    );
    ensure!(rep.consistent, "certify reports an inconsistency");
    Ok(())
}

pub fn sat_equivalence_exhaustive(q_max: usize) -> Check {
    for cnf in enumerate_three_variable_cnfs(2, q_max, usize::MAX) {
        sat_equivalence(&cnf, 1 << 10)
            .map_err(|e| Failure(format!("{}: {e}", cnf.to_dimacs().trim())))?;
    }
    Ok(())
}

/// Per assignment, the reduced MSD stays under the block bound of its match
/// matrix, whose columns repeat in blocks of `2q̃`.
pub fn sat_bound_consistency(seed: u64) -> Check {
    let cnf = sat_fixture(seed, 4, 3, true)?;
    let r = build_msd_sdp(&cnf)?;
    let dup = 2 * r.q_tilde;
    let exact = exact_msd_detail(&r, 1 << 10)?;
    let mut best = 0;
    for mask in 0..1u64 << r.p {
        let a = Assignment::from_mask(r.p, mask);
        let m = match_matrix(&r, &a)?;
        let columns: Vec<Vec<bool>> = (0..r.q_tilde)
            .map(|j| m.iter().map(|row| row[j * dup]).collect())
            .collect();
        ensure!(
            duplicated_block_matrix(&columns, dup) == m,
            "match matrix is not block-duplicated"
        );
        let value = r.p + msd_lp(&reduced_lp_for_assignment(&r, &a)?)?;
        best = best.max(value);
        match msd_upper_bound_blocks(&columns, dup) {
            Ok(b) => ensure!(
                value <= r.p + b,
                "assignment {a}: {value} exceeds p + bound {}",
                r.p + b
            ),
            Err(Error::NotApplicable(_)) => {}
            Err(e) => return Err(e.into()),
        }
    }
    ensure!(
        best == exact.msd,
        "enumeration gives {best}, exact_msd gives {}",
        exact.msd
    );
    Ok(())
}

// ---------------------------------------------------------------- cli

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn frkit(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_frkit"))
        .args(args)
        .env_remove("FR_SEED")
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

pub fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).expect("temp file");
    p.display().to_string()
}

pub fn json_file<T: serde::Serialize>(dir: &Path, name: &str, v: &T) -> String {
    write(
        dir,
        name,
        &serde_json::to_string_pretty(v).expect("serializes"),
    )
}

pub fn without_timings(text: &str) -> Result<String, Failure> {
    let mut v: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Failure(format!("bad JSON: {e}")))?;
    if let Some(o) = v.as_object_mut() {
        o.remove("timings_ms");
    }
    Ok(v.to_string())
}

pub const SAT_CNF: &str = "p cnf 3 2\n1 2 3 0\n-1 -2 -3 0\n";

/// Identical invocations give identical reports once timings are removed.
pub fn cli_determinism() -> Check {
    let dir = tempfile::tempdir().map_err(|e| Failure(e.to_string()))?;
    let lp = json_file(dir.path(), "allone.json", &frkit::lp_fr::allone_lp(2, 3));
    let cnf = write(dir.path(), "sat.cnf", SAT_CNF);
    let cases: Vec<Vec<&str>> = vec![
        vec!["lp", "analyze", &lp, "--brute"],
        vec!["sdp", "lowrank", "--worst-case", "5", "--seed", "3"],
        vec!["sat", "certify", &cnf],
        vec!["sat", "reduce", &cnf],
    ];
    for args in cases {
        let a = frkit(&args);
        let b = frkit(&args);
        ensure!(
            a.code == 0 && b.code == 0,
            "{args:?} exited {} / {}: {}",
            a.code,
            b.code,
            a.stderr
        );
        ensure!(
            without_timings(&a.stdout)? == without_timings(&b.stdout)?,
            "{args:?} is not deterministic"
        );
    }
    Ok(())
}

/// Emitted problems and sequences re-ingest to equal values and verify.
pub fn cli_round_trip() -> Check {
    let dir = tempfile::tempdir().map_err(|e| Failure(e.to_string()))?;
    let d = dir.path();
    let out = |name: &str| d.join(name).display().to_string();

    let wc = out("wc.json");
    ensure!(
        frkit(&["sdp", "worst-case", "5", "-o", &wc]).code == 0,
        "worst-case failed"
    );
    let back: SdpProblem = serde_json::from_str(&std::fs::read_to_string(&wc).unwrap())
        .map_err(|e| Failure(e.to_string()))?;
    ensure!(
        back == worst_case_instance(5)?,
        "worst-case instance does not round-trip"
    );

    let cnf = write(d, "sat.cnf", SAT_CNF);
    let red = out("red.json");
    ensure!(
        frkit(&["sat", "reduce", &cnf, "-o", &red]).code == 0,
        "reduce failed"
    );
    let text = std::fs::read_to_string(&red).unwrap();
    let back: SdpProblem = serde_json::from_str(&text).map_err(|e| Failure(e.to_string()))?;
    let pre = frkit::sat_reduce::preprocess(&frkit::sat_reduce::parse_dimacs(SAT_CNF)?);
    let r = build_msd_sdp(&duplicate_clauses(&pre.cnf)?)?;
    ensure!(back == r.sdp, "reduction does not round-trip");

    let seq = out("seq.json");
    ensure!(
        frkit(&["sat", "sequence", &cnf, "--assign", "1,0,0", "-o", &seq]).code == 0,
        "sequence failed"
    );
    let v = frkit(&["sdp", "verify", &red, &seq]);
    ensure!(
        v.code == 0,
        "induced sequence does not verify: {}",
        v.stderr
    );

    let set = random_lp(17);
    let lp = json_file(d, "lp.json", &set);
    let lp_back: LinearSet = serde_json::from_str(&std::fs::read_to_string(&lp).unwrap())
        .map_err(|e| Failure(e.to_string()))?;
    ensure!(lp_back == set, "LinearSet does not round-trip");
    let a = frkit(&["lp", "analyze", &lp]);
    ensure!(a.code == 0, "lp analyze failed: {}", a.stderr);
    let report: serde_json::Value =
        serde_json::from_str(&a.stdout).map_err(|e| Failure(e.to_string()))?;
    let seq_back: FRSequenceLP = serde_json::from_value(report["result"]["sequence"].clone())
        .map_err(|e| Failure(e.to_string()))?;
    ensure!(
        seq_back == fra_minimal(&set, &full(&set))?,
        "LP sequence does not round-trip"
    );
    let lp_seq = json_file(d, "lp_seq.json", &seq_back);
    ensure!(
        frkit(&["lp", "verify", &lp, &lp_seq]).code == 0,
        "emitted LP sequence does not verify"
    );

    let lr = frkit(&["sdp", "lowrank", "--worst-case", "4"]);
    let report: serde_json::Value =
        serde_json::from_str(&lr.stdout).map_err(|e| Failure(e.to_string()))?;
    let sdp_seq = json_file(d, "sdp_seq.json", &report["result"]["sequence"]);
    let sdp_p = json_file(d, "wc4.json", &worst_case_instance(4)?);
    let sdp_back: FRSequenceSDP = serde_json::from_str(&std::fs::read_to_string(&sdp_seq).unwrap())
        .map_err(|e| Failure(e.to_string()))?;
    ensure!(
        serde_json::to_value(&sdp_back).unwrap() == report["result"]["sequence"],
        "SDP sequence does not re-serialize identically"
    );
    ensure!(
        frkit(&["sdp", "verify", &sdp_p, &sdp_seq]).code == 0,
        "emitted SDP sequence does not verify"
    );
    Ok(())
}

/// 0 success, 1 claim violated, 2 input error, 4 budget.
pub fn cli_exit_codes() -> Check {
    let dir = tempfile::tempdir().map_err(|e| Failure(e.to_string()))?;
    let d = dir.path();
    let lp = json_file(d, "allone.json", &frkit::lp_fr::allone_lp(2, 2));
    let expect = |args: &[&str], code: i32| -> Check {
        let r = frkit(args);
        ensure!(
            r.code == code,
            "{args:?} exited {} not {code}: {}",
            r.code,
            r.stderr
        );
        Ok(())
    };
    expect(&["lp", "analyze", &lp], 0)?;

    let p = json_file(d, "notminex.json", &notminex());
    let good = FRSequenceSDP::from_steps(
        SdpFace::full(3),
        vec![
            SdpExposingVector::pick(&notminex(), 2),
            SdpExposingVector::pick(&notminex(), 0),
        ],
        TOL,
    )?;
    let good_path = json_file(d, "good.json", &good);
    expect(&["sdp", "verify", &p, &good_path], 0)?;
    let mut bad = good.clone();
    bad.steps[0].w.set(0, 0, 5.0);
    let bad_path = json_file(d, "bad.json", &bad);
    expect(&["sdp", "verify", &p, &bad_path], 1)?;

    let missing = d.join("missing.json").display().to_string();
    expect(&["lp", "analyze", &missing], 2)?;
    let garbage = write(d, "garbage.json", "{not json");
    expect(&["lp", "analyze", &garbage], 2)?;
    let wide = write(d, "wide.cnf", "p cnf 4 1\n1 2 3 4 0\n");
    expect(&["sat", "certify", &wide], 2)?;
    expect(&["sat", "frobnicate"], 2)?;
    let cnf = write(d, "sat.cnf", SAT_CNF);
    expect(&["sat", "certify", &cnf, "--budget", "4"], 4)?;
    expect(&["sat", "sequence", &cnf, "--assign", "1,1,1"], 2)?;
    Ok(())
}

// ---------------------------------------------------------------- manifest

pub type SeededCheck = fn(u64) -> Check;

/// Seeded properties with the number of consecutive seeds run from the base.
pub const SEEDED: &[(&str, SeededCheck, u64)] = &[
    (
        "kernel: simplex points are exactly feasible",
        kernel_simplex_exact,
        300,
    ),
    ("kernel: strong duality", kernel_duality, 300),
    (
        "kernel: eigen reconstruction and orthonormality",
        kernel_eig,
        1000,
    ),
    (
        "kernel: psd verdict is scale invariant",
        kernel_psd_scale,
        200,
    ),
    ("lp: soundness of every operation", lp_soundness, 100),
    (
        "lp: tie-break independence equals brute force",
        lp_main_theorem,
        60,
    ),
    ("lp: longest chains are minimal", lp_longest_is_minimal, 60),
    ("lp: swap contract", lp_swap_contract, 100),
    ("lp: removal contract", lp_removal_contract, 100),
    (
        "lp: minimal exposing vector is unique in its support",
        lp_sdpminunique,
        200,
    ),
    ("lp: block upper bound", lp_upper_bound, 60),
    (
        "sdp: low-rank chains verify and shrink",
        sdp_chain_soundness,
        24,
    ),
    (
        "sdp: rank-one drops are minimal LP steps",
        sdp_dim1_on_diagonal,
        100,
    ),
    (
        "sdp: block restriction preserves msd",
        sdp_simplify_preserves_msd,
        50,
    ),
    ("sat: generator invariants", sat_generator_invariants, 50),
    ("sat: sparsity law", sat_sparsity_law, 50),
    ("sat: block-diagonal law", sat_block_diagonal_law, 20),
    ("sat: forward soundness", sat_forward_soundness, 20),
    ("sat: bound consistency", sat_bound_consistency, 10),
];

pub type FixedCheck = fn() -> Check;

pub const FIXED: &[(&str, FixedCheck)] = &[
    (
        "sdp: psd counterexample to the join property",
        sdp_psd_counterexample,
    ),
    ("sdp: rank table", sdp_rank_table),
    (
        "sat: equivalence for three-variable CNFs up to eight clauses",
        || sat_equivalence_exhaustive(8),
    ),
    ("cli: determinism", cli_determinism),
    ("cli: exit codes", cli_exit_codes),
    ("cli: round trip", cli_round_trip),
];
