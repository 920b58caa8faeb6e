//! Swapping adjacent steps and removing a redundant variable.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::Rational;

use super::exposing::y_space_exact;
use super::types::{FRSequenceLP, LinearSet, LpExposingVector, OrthantFace};

/// Exchanges the blocks zeroed by steps `j` and `j + 1` (0-based) of a
/// minimal sequence, keeping it minimal.
pub fn swap_steps(set: &LinearSet, seq: &FRSequenceLP, j: usize) -> Result<FRSequenceLP> {
    if j + 1 >= seq.len() {
        return Err(Error::PreconditionFailed(format!(
            "swap needs steps {j} and {} but the sequence has {}",
            j + 1,
            seq.len()
        )));
    }
    for k in [j, j + 1] {
        seq.steps[k].check(set, &seq.faces[k]).map_err(|e| {
            Error::PreconditionFailed(format!("step {k} is not a valid certificate: {e}"))
        })?;
    }
    let first = seq.block(j);
    let second = seq.block(j + 1);
    let before = &seq.faces[j];
    let w1 = &seq.steps[j];
    let w2 = &seq.steps[j + 1];

    let (v1, v2) = if first.len() == 1 {
        let s = first[0];
        let alpha = &w2.w[s] / &w1.w[s];
        let y: Vec<Rational> =
            w2.y.iter()
                .zip(&w1.y)
                .map(|(a, b)| a - &(&alpha * b))
                .collect();
        (LpExposingVector::from_multiplier(set, y), w1.clone())
    } else if second.len() == 1 {
        let y = y_space_exact(set, &before.support(), &second)?.ok_or_else(|| {
            Error::PreconditionFailed(format!(
                "no exposing vector isolates index {} on face {}",
                second[0] + 1,
                j
            ))
        })?;
        (LpExposingVector::from_multiplier(set, y), w1.clone())
    } else {
        return Err(Error::PreconditionFailed(format!(
            "blocks of steps {j} and {} both have two or more indices",
            j + 1
        )));
    };

    let mut out = seq.clone();
    out.faces[j + 1] = before.with_zeros(second.iter().copied());
    out.steps[j] = v1;
    out.steps[j + 1] = v2;
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RemovalCase {
    /// The removed variable was zeroed alone; its step is dropped.
    One,
    /// The removed variable shared its step; all steps are kept.
    Two,
}

#[derive(Clone, Debug)]
pub struct Removal {
    pub set: LinearSet,
    pub seq: FRSequenceLP,
    pub case: RemovalCase,
    pub minimal_out: bool,
}

fn drop_index(face: &OrthantFace, var: usize) -> OrthantFace {
    let zeros = face
        .zero_set()
        .iter()
        .filter(|&&i| i != var)
        .map(|&i| if i > var { i - 1 } else { i });
    OrthantFace::new(face.n() - 1, zeros).expect("shifted indices stay in range")
}

/// Deletes column `var` from `A` and carries a minimal sequence over to the
/// smaller system.
pub fn remove_variable(set: &LinearSet, seq: &FRSequenceLP, var: usize) -> Result<Removal> {
    if var >= set.n() {
        return Err(Error::DimensionMismatch(format!(
            "variable {var} outside 0..{}",
            set.n()
        )));
    }
    if !seq.final_face().zero_set().contains(&var) {
        return Err(Error::NotRedundant(var));
    }
    let j = (0..seq.len())
        .find(|&k| {
            seq.faces[k + 1].zero_set().contains(&var) && !seq.faces[k].zero_set().contains(&var)
        })
        .ok_or_else(|| {
            Error::PreconditionFailed("variable is zero already in the starting face".into())
        })?;
    let smaller = set.without_variable(var)?;
    let single = seq.block(j).len() == 1;
    let mut steps: Vec<LpExposingVector> = seq.steps.iter().map(|w| w.truncated(var)).collect();
    let mut faces: Vec<OrthantFace> = seq.faces.iter().map(|f| drop_index(f, var)).collect();
    let (case, minimal_out) = if single {
        steps.remove(j);
        faces.remove(j + 1);
        (RemovalCase::One, set.unit_in_perp(var))
    } else {
        (RemovalCase::Two, true)
    };
    Ok(Removal {
        set: smaller,
        seq: FRSequenceLP { steps, faces },
        case,
        minimal_out,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp_fr::{fra_minimal, generators::allone_lp, verify_sequence_lp};

    fn full(n: usize) -> OrthantFace {
        OrthantFace::full(n)
    }

    #[test]
    fn singleton_then_block_swaps() {
        // x1 = 0 exposed by e1, then x2 + x3 = x1 forces x2 = x3 = 0.
        let set = LinearSet::from_i64(&[vec![1, 0, 0], vec![-1, 1, 1]], &[0, 0]).unwrap();
        let seq = fra_minimal(&set, &full(3)).unwrap();
        assert_eq!(seq.len(), 2);
        assert_eq!(seq.block(0), vec![0]);
        assert_eq!(seq.block(1), vec![1, 2]);
        let swapped = swap_steps(&set, &seq, 0).unwrap();
        assert_eq!(swapped.faces[1], OrthantFace::new(3, [1, 2]).unwrap());
        assert_eq!(swapped.faces[2], seq.faces[2]);
        let report = verify_sequence_lp(&set, &swapped).unwrap();
        assert!(report.valid && report.minimal);
    }

    #[test]
    fn two_wide_blocks_cannot_swap() {
        let set = allone_lp(2, 3);
        let seq = fra_minimal(&set, &full(6)).unwrap();
        let wide =
            (0..seq.len() - 1).find(|&k| seq.block(k).len() >= 2 && seq.block(k + 1).len() >= 2);
        if let Some(k) = wide {
            assert!(matches!(
                swap_steps(&set, &seq, k),
                Err(Error::PreconditionFailed(_))
            ));
        }
        assert!(matches!(
            swap_steps(&set, &seq, seq.len()),
            Err(Error::PreconditionFailed(_))
        ));
    }

    #[test]
    fn removal_cases() {
        // e1 ∈ L^⊥ (row x1 = 0) then x2 + x3 = 0.
        let set = LinearSet::from_i64(&[vec![1, 0, 0], vec![0, 1, 1]], &[0, 0]).unwrap();
        let seq = fra_minimal(&set, &full(3)).unwrap();
        let k1 = (0..seq.len()).find(|&k| seq.block(k).len() == 1).unwrap();
        let var = seq.block(k1)[0];
        let out = remove_variable(&set, &seq, var).unwrap();
        assert_eq!(out.case, RemovalCase::One);
        assert!(out.minimal_out);
        assert_eq!(out.seq.len(), seq.len() - 1);
        let k2 = (0..seq.len()).find(|&k| seq.block(k).len() == 2).unwrap();
        let out = remove_variable(&set, &seq, seq.block(k2)[0]).unwrap();
        assert_eq!(out.case, RemovalCase::Two);
        let report = verify_sequence_lp(&out.set, &out.seq).unwrap();
        assert!(report.valid && report.minimal);
        assert_eq!(report.length, seq.len());
    }

    #[test]
    fn removal_case_one_without_unit_vector() {
        // x1 + x2 = 0 then x3 = x1: e3 ∉ L^⊥.
        let set = LinearSet::from_i64(&[vec![1, 1, 0], vec![1, 0, -1]], &[0, 0]).unwrap();
        let seq = fra_minimal(&set, &full(3)).unwrap();
        assert!(!set.unit_in_perp(2));
        let k = (0..seq.len()).find(|&k| seq.block(k) == vec![2]);
        if let Some(k) = k {
            let out = remove_variable(&set, &seq, 2).unwrap();
            assert_eq!(out.case, RemovalCase::One);
            assert!(!out.minimal_out);
            assert_eq!(out.seq.len(), seq.len() - 1);
            assert!(k < seq.len());
        }
    }

    #[test]
    fn not_redundant() {
        let set = LinearSet::from_i64(&[vec![1, -1]], &[0]).unwrap();
        let seq = fra_minimal(&set, &full(2)).unwrap();
        assert_eq!(
            remove_variable(&set, &seq, 0).unwrap_err(),
            Error::NotRedundant(0)
        );
    }
}
