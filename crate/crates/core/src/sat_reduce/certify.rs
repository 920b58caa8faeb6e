use serde::Serialize;

use crate::error::Result;
use crate::kernel::DEFAULT_RANK_TOL;
use crate::sdp_fr::{verify_sequence_sdp, FRSequenceSDP};

use super::cnf::{
    brute_force_sat, check_budget, duplicate_clauses, preprocess, Assignment, CnfInstance,
};
use super::reduction::{
    assignment_to_sequence, build_msd_sdp, exact_msd_detail, ReductionInstance,
};

/// A satisfying assignment and the sequence of length `d` it induces.
#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    /// Values of the preprocessed (renumbered) variables.
    #[serde(serialize_with = "as_text")]
    pub assignment: Assignment,
    /// The same assignment extended to the input variables.
    #[serde(serialize_with = "as_text")]
    pub input_assignment: Assignment,
    #[serde(skip)]
    pub sequence: FRSequenceSDP,
    pub length: usize,
    pub verified: bool,
}

fn as_text<S: serde::Serializer>(a: &Assignment, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&a.to_string())
}

#[derive(Clone, Debug, Serialize)]
pub struct CertifyReport {
    pub satisfiable: bool,
    pub msd: usize,
    pub d: usize,
    pub p: usize,
    pub q: usize,
    pub q_tilde: usize,
    /// Preprocessing removed every clause.
    pub trivialized: bool,
    /// `(msd ≥ d) ⇔ satisfiable`, and the witness verifies when present.
    pub consistent: bool,
    pub witness: Option<Witness>,
    #[serde(skip)]
    pub reduction: Option<ReductionInstance>,
}

/// Preprocesses, duplicates, builds the instance and compares its exact
/// maximum singularity degree with brute-force satisfiability.
pub fn certify(cnf: &CnfInstance, budget: u64) -> Result<CertifyReport> {
    let pre = preprocess(cnf);
    check_budget(pre.cnf.p, budget)?;
    if pre.trivialized() {
        return Ok(CertifyReport {
            satisfiable: true,
            msd: 0,
            d: 0,
            p: 0,
            q: 0,
            q_tilde: 0,
            trivialized: true,
            consistent: true,
            witness: None,
            reduction: None,
        });
    }
    let dup = duplicate_clauses(&pre.cnf)?;
    let r = build_msd_sdp(&dup)?;
    let exact = exact_msd_detail(&r, budget)?;
    let solution = brute_force_sat(&pre.cnf, budget)?;
    let witness = match solution {
        Some(a) => {
            let sequence = assignment_to_sequence(&r, &a)?;
            let report = verify_sequence_sdp(&r.sdp, &sequence, DEFAULT_RANK_TOL)?;
            Some(Witness {
                input_assignment: pre.lift(&a, cnf.p),
                assignment: a,
                length: sequence.len(),
                verified: report.valid && report.length == r.d,
                sequence,
            })
        }
        None => None,
    };
    let satisfiable = witness.is_some();
    let consistent =
        (exact.msd >= r.d) == satisfiable && witness.as_ref().is_none_or(|w| w.verified);
    Ok(CertifyReport {
        satisfiable,
        msd: exact.msd,
        d: r.d,
        p: r.p,
        q: r.q,
        q_tilde: r.q_tilde,
        trivialized: false,
        consistent,
        witness,
        reduction: Some(r),
    })
}
