use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{lp_solve, LpOutcome, LpTask, Rational};

use super::exposing::{
    check_face, check_order, find_exposing, find_minimal_exposing_ordered, is_minimal_step,
    max_support_exposing, TieBreak,
};
use super::types::{FRSequenceLP, LinearSet, OrthantFace};

/// Greedy minimal facial reduction from `start`. Its length is the maximum
/// singularity degree of `L ∩ start`.
pub fn fra_minimal(set: &LinearSet, start: &OrthantFace) -> Result<FRSequenceLP> {
    fra_minimal_ordered(set, start, None)
}

/// [`fra_minimal`] under a tie-break priority over `0..n`.
pub fn fra_minimal_ordered(
    set: &LinearSet,
    start: &OrthantFace,
    order: TieBreak,
) -> Result<FRSequenceLP> {
    check_face(set, start)?;
    check_order(set.n(), order)?;
    let mut seq = FRSequenceLP::empty(start.clone());
    loop {
        let face = seq.final_face().clone();
        if face.is_zero_face() {
            break;
        }
        let Some(w) = find_minimal_exposing_ordered(set, &face, order)? else {
            break;
        };
        let exposed = w.check(set, &face).map_err(|e| {
            Error::PreconditionFailed(format!("solver produced an invalid step: {e}"))
        })?;
        seq.faces.push(face.with_zeros(exposed));
        seq.steps.push(w);
    }
    Ok(seq)
}

/// Maximum singularity degree of `L ∩ R^n_+`.
pub fn msd_lp(set: &LinearSet) -> Result<usize> {
    Ok(fra_minimal(set, &OrthantFace::full(set.n()))?.len())
}

/// Singularity degree of `L ∩ R^n_+` together with a maximum-support step
/// when it is 1.
pub fn sd_lp(set: &LinearSet) -> Result<(usize, Option<super::LpExposingVector>)> {
    let full = OrthantFace::full(set.n());
    if find_exposing(set, &full)?.is_none() {
        return Ok((0, None));
    }
    let w = max_support_exposing(set, &full)?;
    Ok((1, w))
}

/// Smallest orthant face containing `L ∩ R^n_+`, found by repeatedly
/// maximizing the number of positive coordinates of feasible points.
pub fn minimal_cone_lp(set: &LinearSet) -> Result<OrthantFace> {
    let n = set.n();
    let mut positive = vec![false; n];
    let mut first = true;
    loop {
        let open: Vec<usize> = (0..n).filter(|&i| !positive[i]).collect();
        // Variables: x (n) then t (one per open index).
        let k = open.len();
        let nv = n + k;
        let unit = |idx: usize, v: i64| {
            let mut row = vec![Rational::zero(); nv];
            row[idx] = Rational::from_integer(v);
            row
        };
        let mut task = LpTask {
            objective: (0..nv)
                .map(|j| {
                    if j >= n {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect(),
            num_vars: nv,
            ..Default::default()
        };
        for r in 0..set.m() {
            let mut row = set.a().row(r).to_vec();
            row.resize(nv, Rational::zero());
            task.equalities.push((row, set.b()[r].clone()));
        }
        for i in 0..n {
            task.inequalities_geq.push((unit(i, 1), Rational::zero()));
        }
        for (t, &i) in open.iter().enumerate() {
            let mut row = unit(i, 1);
            row[n + t] = Rational::from_integer(-1);
            task.inequalities_geq.push((row, Rational::zero()));
            task.inequalities_geq
                .push((unit(n + t, -1), Rational::from_integer(-1)));
            task.inequalities_geq
                .push((unit(n + t, 1), Rational::zero()));
        }
        let point = match lp_solve(&task)? {
            LpOutcome::Optimal { point, .. } => point,
            LpOutcome::Infeasible if first => return Err(Error::EmptyFeasibleSet),
            _ => {
                return Err(Error::PreconditionFailed(
                    "support LP lost feasibility".into(),
                ))
            }
        };
        first = false;
        let mut grew = false;
        for &i in &open {
            if point[i].is_positive() {
                positive[i] = true;
                grew = true;
            }
        }
        if !grew || k == 0 {
            break;
        }
    }
    OrthantFace::new(n, (0..n).filter(|&i| !positive[i]))
}

/// Per-step outcome of [`verify_sequence_lp`]. Indices are 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepDiagnosis {
    pub step: usize,
    pub valid: bool,
    pub minimal: bool,
    pub exposed: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub problem: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpVerifyReport {
    pub valid: bool,
    pub minimal: bool,
    pub length: usize,
    pub final_face: OrthantFace,
    /// No exposing vector exists at the final face.
    pub complete: bool,
    pub steps: Vec<StepDiagnosis>,
}

/// Checks every step certificate and face transition, then minimality.
pub fn verify_sequence_lp(set: &LinearSet, seq: &FRSequenceLP) -> Result<LpVerifyReport> {
    let n = set.n();
    let mut steps = Vec::with_capacity(seq.steps.len());
    let mut valid = seq.faces.len() == seq.steps.len() + 1 && seq.faces.iter().all(|f| f.n() == n);
    if !valid {
        return Ok(LpVerifyReport {
            valid: false,
            minimal: false,
            length: seq.steps.len(),
            final_face: seq
                .faces
                .last()
                .cloned()
                .unwrap_or_else(|| OrthantFace::full(n)),
            complete: false,
            steps,
        });
    }
    let mut minimal = true;
    for (i, w) in seq.steps.iter().enumerate() {
        let face = &seq.faces[i];
        let mut diag = StepDiagnosis {
            step: i,
            valid: false,
            minimal: false,
            exposed: Vec::new(),
            problem: None,
        };
        match w.check(set, face) {
            Ok(exposed) => {
                if face.with_zeros(exposed.iter().copied()) != seq.faces[i + 1] {
                    diag.problem = Some("next face is not F ∩ w^⊥".into());
                } else {
                    diag.valid = true;
                    diag.minimal = is_minimal_step(set, face, w)?;
                }
                diag.exposed = exposed;
            }
            Err(e) => diag.problem = Some(e),
        }
        valid &= diag.valid;
        minimal &= diag.minimal;
        steps.push(diag);
    }
    let final_face = seq.final_face().clone();
    let complete = valid && find_exposing(set, &final_face)?.is_none();
    Ok(LpVerifyReport {
        valid,
        minimal: valid && minimal,
        length: seq.steps.len(),
        final_face,
        complete,
        steps,
    })
}
