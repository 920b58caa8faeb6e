use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::DEFAULT_RANK_TOL;
use crate::lp_fr::{msd_lp, LinearSet};
use crate::sdp_fr::{
    sdp_to_lp_if_diagonal, simplify_blockdiag, DiagonalOptions, FRSequenceSDP, SdpExposingVector,
    SdpFace, SdpProblem, SparseSym,
};

use super::cnf::{check_budget, Assignment, Clause, CnfInstance};

pub type Triple = [i64; 3];

/// The row/column labels `(i, j, k)`: `k ∈ {1, 2}` copies of every
/// (variable, clause) incidence, ordered by `(k, j, i)`, then `(0, 0, 0)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexUniverse {
    pub triples: Vec<Triple>,
    pub lookup: BTreeMap<Triple, usize>,
}

impl IndexUniverse {
    pub fn new(clauses: &[Clause]) -> Self {
        let mut triples = Vec::with_capacity(6 * clauses.len() + 1);
        for k in 1..=2 {
            for (j, c) in clauses.iter().enumerate() {
                let mut vars: Vec<i64> = c.iter().map(|l| l.unsigned_abs() as i64).collect();
                vars.sort_unstable();
                triples.extend(vars.into_iter().map(|i| [i, j as i64 + 1, k]));
            }
        }
        triples.push([0, 0, 0]);
        let lookup = triples.iter().enumerate().map(|(r, t)| (*t, r)).collect();
        IndexUniverse { triples, lookup }
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn index(&self, t: Triple) -> Option<usize> {
        self.lookup.get(&t).copied()
    }

    pub fn sentinel(&self) -> usize {
        self.triples.len() - 1
    }
}

/// Row indices of `𝒯_i` (positive occurrences), `ℱ_i` (negative
/// occurrences) and `𝒱_i` (all occurrences, second copy).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TruthSets {
    pub t: Vec<usize>,
    pub f: Vec<usize>,
    pub v: Vec<usize>,
}

/// Row indices of `𝒞_j` (first copy) and `𝒟_j` (second copy) of clause `j`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClauseSets {
    pub c: Vec<usize>,
    pub d: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct ReductionInstance {
    pub sdp: SdpProblem,
    pub universe: IndexUniverse,
    pub p: usize,
    pub q: usize,
    pub q_tilde: usize,
    /// Target length `p + q`.
    pub d: usize,
    pub truth_sets: Vec<TruthSets>,
    pub clause_sets: Vec<ClauseSets>,
    pub clauses: Vec<Clause>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionMeta {
    pub p: usize,
    pub q: usize,
    pub q_tilde: usize,
    pub d: usize,
}

impl ReductionInstance {
    pub fn meta(&self) -> ReductionMeta {
        ReductionMeta {
            p: self.p,
            q: self.q,
            q_tilde: self.q_tilde,
            d: self.d,
        }
    }

    /// The problem JSON with its labels plus a `meta` object.
    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(&self.sdp).expect("problem serializes");
        v["meta"] = serde_json::to_value(self.meta()).expect("meta serializes");
        v
    }

    /// `A_i` for `u_i` false, `A_{p+i}` for `u_i` true (0-based matrix index).
    pub fn truth_matrix(&self, i: usize, value: bool) -> usize {
        if value {
            self.p + i
        } else {
            i
        }
    }

    fn check_assignment(&self, a: &Assignment) -> Result<()> {
        if a.values.len() != self.p {
            return Err(Error::DimensionMismatch(format!(
                "assignment has {} values for {} variables",
                a.values.len(),
                self.p
            )));
        }
        Ok(())
    }
}

/// The instance of a preprocessed CNF (duplicated or not).
pub fn build_msd_sdp(cnf: &CnfInstance) -> Result<ReductionInstance> {
    if !cnf.preprocessed {
        return Err(Error::NotPreprocessed);
    }
    build_msd_sdp_unchecked(cnf)
}

/// The same construction without the occurrence assumption, for
/// illustrative instances in which some `𝒯_i` or `ℱ_i` is empty.
pub fn build_msd_sdp_unchecked(cnf: &CnfInstance) -> Result<ReductionInstance> {
    if cnf.clauses.is_empty() {
        return Err(Error::PreconditionFailed(
            "an instance without clauses has no constraints".into(),
        ));
    }
    if let Some(j) = cnf.clauses.iter().position(CnfInstance::is_tautology) {
        return Err(Error::PreconditionFailed(format!(
            "clause {} is a tautology",
            j + 1
        )));
    }
    let (p, q) = (cnf.p, cnf.q());
    let universe = IndexUniverse::new(&cnf.clauses);
    let n = universe.len();
    let sentinel = universe.sentinel();
    let mut truth_sets = vec![TruthSets::default(); p];
    let mut clause_sets = vec![ClauseSets::default(); q];
    for (j, c) in cnf.clauses.iter().enumerate() {
        for &l in c {
            let i = l.unsigned_abs() as i64;
            let first = universe.lookup[&[i, j as i64 + 1, 1]];
            let second = universe.lookup[&[i, j as i64 + 1, 2]];
            let ts = &mut truth_sets[i as usize - 1];
            if l > 0 {
                ts.t.push(first);
            } else {
                ts.f.push(first);
            }
            ts.v.push(second);
            clause_sets[j].c.push(first);
            clause_sets[j].d.push(second);
        }
    }
    for s in truth_sets.iter_mut() {
        s.t.sort_unstable();
        s.f.sort_unstable();
        s.v.sort_unstable();
    }
    for s in clause_sets.iter_mut() {
        s.c.sort_unstable();
        s.d.sort_unstable();
    }
    let diagonal = |rows: &[&[usize]]| {
        let t: Vec<(usize, usize, f64)> = rows
            .iter()
            .flat_map(|r| r.iter())
            .map(|&r| (r, r, 1.0))
            .collect();
        SparseSym::from_triplets(n, &t).expect("diagonal entries")
    };
    let mut mats = Vec::with_capacity(2 * p + q);
    mats.extend(truth_sets.iter().map(|s| diagonal(&[&s.t, &s.v])));
    mats.extend(truth_sets.iter().map(|s| diagonal(&[&s.f, &s.v])));
    for s in &clause_sets {
        let mut t: Vec<(usize, usize, f64)> = s.c.iter().map(|&r| (r, r, 1.0)).collect();
        t.extend(s.d.iter().map(|&r| (r, sentinel, 1.0)));
        mats.push(SparseSym::from_triplets(n, &t).expect("upper-triangle entries"));
    }
    let sdp =
        SdpProblem::new(n, mats, vec![0.0; 2 * p + q])?.with_labels(universe.triples.clone())?;
    Ok(ReductionInstance {
        sdp,
        universe,
        p,
        q,
        q_tilde: cnf.q_tilde(),
        d: p + q,
        truth_sets,
        clause_sets,
        clauses: cnf.clauses.clone(),
    })
}

/// Truth-setting steps in variable order, then every clause matrix.
pub fn assignment_to_sequence(r: &ReductionInstance, a: &Assignment) -> Result<FRSequenceSDP> {
    r.check_assignment(a)?;
    if let Some(j) = r
        .clauses
        .iter()
        .position(|c| !c.iter().any(|&l| a.literal_true(l)))
    {
        return Err(Error::UnsatisfiedAssignment { clause: j + 1 });
    }
    let steps = (0..r.p)
        .map(|i| r.truth_matrix(i, a.values[i]))
        .chain(2 * r.p..2 * r.p + r.q)
        .map(|k| SdpExposingVector::pick(&r.sdp, k))
        .collect();
    FRSequenceSDP::from_steps(SdpFace::full(r.sdp.n), steps, DEFAULT_RANK_TOL)
}

/// Rows kept after the truth-setting steps: first copies of the literals
/// the assignment makes true, and `(0,0,0)`.
pub fn assignment_support(r: &ReductionInstance, a: &Assignment) -> Result<Vec<usize>> {
    r.check_assignment(a)?;
    let mut rows: Vec<usize> = r
        .truth_sets
        .iter()
        .zip(&a.values)
        .flat_map(|(s, &v)| if v { s.t.iter() } else { s.f.iter() })
        .copied()
        .collect();
    rows.push(r.universe.sentinel());
    rows.sort_unstable();
    Ok(rows)
}

/// `M_ij = 1` iff the assignment makes the literal of `u_i` in `c_j` true.
pub fn match_matrix(r: &ReductionInstance, a: &Assignment) -> Result<Vec<Vec<bool>>> {
    r.check_assignment(a)?;
    let mut m = vec![vec![false; r.q]; r.p];
    for (j, c) in r.clauses.iter().enumerate() {
        for &l in c {
            if a.literal_true(l) {
                m[l.unsigned_abs() as usize - 1][j] = true;
            }
        }
    }
    Ok(m)
}

/// The orthant system left after the truth-setting steps: restriction to
/// the block of [`assignment_support`], conversion of the (diagonal)
/// restricted matrices, and removal of coordinates no row touches.
pub fn reduced_lp_for_assignment(r: &ReductionInstance, a: &Assignment) -> Result<LinearSet> {
    let face = SdpFace::block(r.sdp.n, assignment_support(r, a)?)?;
    let reduced = simplify_blockdiag(&r.sdp, &face)?;
    let lp = sdp_to_lp_if_diagonal(&reduced, DiagonalOptions::default())
        .ok_or_else(|| Error::PreconditionFailed("restricted matrices are not diagonal".into()))?;
    Ok(lp.set)
}

/// Exact maximum singularity degree with a maximizing assignment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMsd {
    pub msd: usize,
    /// The first assignment in mask order attaining `msd`.
    pub argmax: Assignment,
}

/// `max_a p + msd_lp(reduced_lp_for_assignment(R, a))` over all `2^p`
/// assignments.
pub fn exact_msd_of_reduction(r: &ReductionInstance, budget: u64) -> Result<usize> {
    exact_msd_detail(r, budget).map(|e| e.msd)
}

pub fn exact_msd_detail(r: &ReductionInstance, budget: u64) -> Result<ExactMsd> {
    check_budget(r.p, budget)?;
    let values = (0..1u64 << r.p)
        .into_par_iter()
        .map(|mask| {
            let a = Assignment::from_mask(r.p, mask);
            Ok(r.p + msd_lp(&reduced_lp_for_assignment(r, &a)?)?)
        })
        .collect::<Result<Vec<usize>>>()?;
    let (mask, &msd) = values
        .iter()
        .enumerate()
        .rev()
        .max_by_key(|(_, &v)| v)
        .expect("at least one assignment");
    Ok(ExactMsd {
        msd,
        argmax: Assignment::from_mask(r.p, mask as u64),
    })
}
