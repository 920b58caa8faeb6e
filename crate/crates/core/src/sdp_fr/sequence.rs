use nalgebra::DMatrix;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Result;

use super::face::{apply_fr_step, check_with_rank, ExposingStatus, SdpExposingVector, SdpFace};
use super::problem::{sparse_to_triplets, triplets_to_sparse, JsonNum, SdpProblem, Triplet};

#[derive(Clone, Debug)]
pub struct FRSequenceSDP {
    pub steps: Vec<SdpExposingVector>,
    pub faces: Vec<SdpFace>,
}

impl FRSequenceSDP {
    pub fn empty(start: SdpFace) -> Self {
        FRSequenceSDP {
            steps: Vec::new(),
            faces: vec![start],
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn final_face(&self) -> &SdpFace {
        self.faces.last().expect("face chain is never empty")
    }

    /// Applies each certificate in turn from `start`, computing the faces.
    pub fn from_steps(start: SdpFace, steps: Vec<SdpExposingVector>, tol: f64) -> Result<Self> {
        let mut faces = vec![start];
        for e in &steps {
            let next = apply_fr_step(faces.last().unwrap(), e, tol)?;
            faces.push(next);
        }
        Ok(FRSequenceSDP { steps, faces })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SdpStepDiagnosis {
    pub step: usize,
    pub status: ExposingStatus,
    pub rank: usize,
    pub face_matches: bool,
}

#[derive(Clone, Debug)]
pub struct SdpVerifyReport {
    pub valid: bool,
    pub length: usize,
    pub rank_drops: Vec<usize>,
    /// `true` where the step drops the face dimension by exactly one, which
    /// is sufficient (not necessary) for minimality.
    pub minimal_certified: Vec<bool>,
    pub final_face: SdpFace,
    pub steps: Vec<SdpStepDiagnosis>,
}

/// Checks each certificate on its face and that the recorded next face is
/// `F ∩ W^⊥`.
pub fn verify_sequence_sdp(
    p: &SdpProblem,
    seq: &FRSequenceSDP,
    tol: f64,
) -> Result<SdpVerifyReport> {
    let mut valid =
        seq.faces.len() == seq.steps.len() + 1 && seq.faces.iter().all(|f| f.n() == p.n);
    let mut steps = Vec::new();
    let mut rank_drops = Vec::new();
    let mut minimal_certified = Vec::new();
    if valid {
        for (i, e) in seq.steps.iter().enumerate() {
            let face = &seq.faces[i];
            let (status, rank) = check_with_rank(p, face, e, tol)?;
            let face_matches = status == ExposingStatus::Valid
                && match apply_fr_step(face, e, tol) {
                    Ok(next) => next.same_as(&seq.faces[i + 1], tol.sqrt()),
                    Err(_) => false,
                };
            valid &= face_matches;
            rank_drops.push(rank);
            minimal_certified.push(face_matches && rank == 1);
            steps.push(SdpStepDiagnosis {
                step: i,
                status,
                rank,
                face_matches,
            });
        }
    }
    Ok(SdpVerifyReport {
        valid,
        length: seq.steps.len(),
        rank_drops,
        minimal_certified,
        final_face: seq.final_face().clone(),
        steps,
    })
}

#[derive(Serialize, Deserialize)]
struct StepJson {
    y: Vec<f64>,
    #[serde(rename = "W")]
    w: Vec<Triplet>,
}

#[derive(Serialize, Deserialize)]
pub(crate) struct FaceJson {
    pub k: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zero_set: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<Vec<f64>>>,
}

#[derive(Serialize, Deserialize)]
struct SequenceJson {
    n: usize,
    steps: Vec<StepJson>,
    faces: Vec<FaceJson>,
}

pub(crate) fn face_to_json(f: &SdpFace) -> FaceJson {
    match f {
        SdpFace::Block { n, support } => FaceJson {
            k: f.k(),
            zero_set: Some(
                (0..*n)
                    .filter(|i| !support.contains(i))
                    .map(|i| i + 1)
                    .collect(),
            ),
            basis: None,
        },
        SdpFace::Basis { v, .. } => FaceJson {
            k: f.k(),
            zero_set: None,
            basis: Some(
                (0..v.nrows())
                    .map(|r| v.row(r).iter().copied().collect())
                    .collect(),
            ),
        },
    }
}

pub(crate) fn face_from_json(n: usize, f: &FaceJson) -> std::result::Result<SdpFace, String> {
    match (&f.zero_set, &f.basis) {
        (Some(zs), None) => {
            if zs.iter().any(|&i| i == 0 || i > n) {
                return Err("zero_set indices are 1-based and at most n".into());
            }
            let face = SdpFace::block(n, (0..n).filter(|i| !zs.contains(&(i + 1))))
                .map_err(|e| e.to_string())?;
            if face.k() != f.k {
                return Err("k disagrees with zero_set".into());
            }
            Ok(face)
        }
        (None, Some(rows)) => {
            if rows.len() != n || rows.iter().any(|r| r.len() != f.k) {
                return Err("basis must be n rows of k entries".into());
            }
            let v = DMatrix::from_fn(n, f.k, |r, c| rows[r][c]);
            Ok(SdpFace::Basis { n, v })
        }
        _ => Err("a face needs exactly one of zero_set or basis".into()),
    }
}

impl Serialize for FRSequenceSDP {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SequenceJson {
            n: self.faces[0].n(),
            steps: self
                .steps
                .iter()
                .map(|e| StepJson {
                    y: e.y.clone(),
                    w: sparse_to_triplets(&e.w)
                        .into_iter()
                        .map(|(i, j, v)| (i, j, JsonNum::Float(v)))
                        .collect(),
                })
                .collect(),
            faces: self.faces.iter().map(face_to_json).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FRSequenceSDP {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = SequenceJson::deserialize(deserializer)?;
        if raw.faces.len() != raw.steps.len() + 1 {
            return Err(D::Error::custom(
                "faces must have one more entry than steps",
            ));
        }
        let steps = raw
            .steps
            .iter()
            .map(|s| {
                triplets_to_sparse(raw.n, &s.w).map(|w| SdpExposingVector { y: s.y.clone(), w })
            })
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(D::Error::custom)?;
        let faces = raw
            .faces
            .iter()
            .map(|f| face_from_json(raw.n, f))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(D::Error::custom)?;
        Ok(FRSequenceSDP { steps, faces })
    }
}
