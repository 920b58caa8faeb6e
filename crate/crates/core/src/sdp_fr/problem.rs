use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::kernel::Rational;

use super::sparse::SparseSym;

/// `L = {X ∈ S^n : ⟨A_i, X⟩ = b_i}` intersected with the PSD cone.
#[derive(Clone, Debug, PartialEq)]
pub struct SdpProblem {
    pub n: usize,
    pub mats: Vec<SparseSym>,
    pub b: Vec<f64>,
    /// Optional triple attached to each row/column index.
    pub labels: Option<Vec<[i64; 3]>>,
}

impl SdpProblem {
    pub fn new(n: usize, mats: Vec<SparseSym>, b: Vec<f64>) -> Result<Self> {
        let p = SdpProblem {
            n,
            mats,
            b,
            labels: None,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_labels(mut self, labels: Vec<[i64; 3]>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "{} labels for order {}",
                labels.len(),
                self.n
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn m(&self) -> usize {
        self.mats.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.mats.is_empty() {
            return Err(Error::DimensionMismatch(
                "an SDP problem needs m >= 1".into(),
            ));
        }
        if self.b.len() != self.mats.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} matrices but b has length {}",
                self.mats.len(),
                self.b.len()
            )));
        }
        if let Some(i) = self.mats.iter().position(|a| a.order() != self.n) {
            return Err(Error::DimensionMismatch(format!(
                "matrix {} is not of order {}",
                i + 1,
                self.n
            )));
        }
        if self.b.iter().any(|v| !v.is_finite()) || self.mats.iter().any(|a| !a.is_finite()) {
            return Err(Error::NonFinite);
        }
        if let Some(l) = &self.labels {
            if l.len() != self.n {
                return Err(Error::DimensionMismatch(
                    "label count differs from n".into(),
                ));
            }
        }
        Ok(())
    }

    /// `Σ y_i A_i`.
    pub fn combine(&self, y: &[f64]) -> SparseSym {
        SparseSym::combination(self.n, &self.mats, y)
    }

    pub fn b_dot(&self, y: &[f64]) -> f64 {
        self.b.iter().zip(y).map(|(a, b)| a * b).sum()
    }

    /// Position of the index carrying `label`.
    pub fn index_of(&self, label: [i64; 3]) -> Option<usize> {
        self.labels.as_ref()?.iter().position(|l| *l == label)
    }
}

/// A JSON number given as a float or as an exact `"p/q"` string.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub(crate) enum JsonNum {
    Float(f64),
    Exact(String),
}

impl JsonNum {
    pub(crate) fn value(&self) -> std::result::Result<f64, String> {
        match self {
            JsonNum::Float(v) => Ok(*v),
            JsonNum::Exact(s) => s
                .parse::<Rational>()
                .map(|r| r.to_f64())
                .map_err(|_| format!("cannot parse number {s:?}")),
        }
    }
}

pub(crate) type Triplet = (usize, usize, JsonNum);

pub(crate) fn triplets_to_sparse(
    n: usize,
    raw: &[Triplet],
) -> std::result::Result<SparseSym, String> {
    let mut t = Vec::with_capacity(raw.len());
    for (i, j, v) in raw {
        if *i == 0 || *j == 0 {
            return Err("matrix triplet indices are 1-based".into());
        }
        t.push((i - 1, j - 1, v.value()?));
    }
    SparseSym::from_triplets(n, &t).map_err(|e| e.to_string())
}

pub(crate) fn sparse_to_triplets(m: &SparseSym) -> Vec<(usize, usize, f64)> {
    m.iter().map(|(i, j, v)| (i + 1, j + 1, v)).collect()
}

#[derive(Serialize, Deserialize)]
struct ProblemJson {
    n: usize,
    m: usize,
    mats: Vec<Vec<Triplet>>,
    b: Vec<JsonNum>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<[i64; 3]>>,
}

impl Serialize for SdpProblem {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ProblemJson {
            n: self.n,
            m: self.m(),
            mats: self
                .mats
                .iter()
                .map(|a| {
                    sparse_to_triplets(a)
                        .into_iter()
                        .map(|(i, j, v)| (i, j, JsonNum::Float(v)))
                        .collect()
                })
                .collect(),
            b: self.b.iter().map(|&v| JsonNum::Float(v)).collect(),
            labels: self.labels.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SdpProblem {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = ProblemJson::deserialize(deserializer)?;
        if raw.mats.len() != raw.m {
            return Err(D::Error::custom("matrix count disagrees with m"));
        }
        let mats = raw
            .mats
            .iter()
            .map(|t| triplets_to_sparse(raw.n, t))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(D::Error::custom)?;
        let b = raw
            .b
            .iter()
            .map(JsonNum::value)
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(D::Error::custom)?;
        let p = SdpProblem {
            n: raw.n,
            mats,
            b,
            labels: raw.labels,
        };
        p.validate().map_err(D::Error::custom)?;
        Ok(p)
    }
}

/// `X11 = 1`, `X22 = 0`, `X_{k+1,k+1} = X_{1,k}` for `k = 2..n−1`; its
/// singularity degree and maximum singularity degree are both `n − 1`.
pub fn worst_case_instance(n: usize) -> Result<SdpProblem> {
    if n < 2 {
        return Err(Error::BadOrder(n));
    }
    let mut mats = vec![SparseSym::unit(n, 0, 0), SparseSym::unit(n, 1, 1)];
    let mut b = vec![1.0, 0.0];
    for k in 2..n {
        // 1-based k maps to 0-based row k − 1 and diagonal k.
        let mut a = SparseSym::unit(n, k, k);
        a.set(0, k - 1, -0.5);
        mats.push(a);
        b.push(0.0);
    }
    SdpProblem::new(n, mats, b)
}

fn dense(rows: &[&[f64]]) -> SparseSym {
    let n = rows.len();
    let mut m = SparseSym::zeros(n);
    for (i, row) in rows.iter().enumerate() {
        for (j, &v) in row.iter().enumerate().skip(i) {
            m.set(i, j, v);
        }
    }
    m
}

/// Three matrices on `S^3` whose only feasible point is zero; `(A_3, A_1)` is
/// minimal of length 2 while `(A_1, A_2, A_3)` has length 3.
pub fn notminex() -> SdpProblem {
    let a1 = dense(&[&[1.0, 0.0, 0.0], &[0.0, 0.0, 0.0], &[0.0, 0.0, 0.0]]);
    let a2 = dense(&[&[-1.0, 1.0, 0.0], &[1.0, 1.0, 0.0], &[0.0, 0.0, 0.0]]);
    let a3 = dense(&[&[0.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]]);
    SdpProblem::new(3, vec![a1, a2, a3], vec![0.0; 3]).expect("fixed data")
}

/// Five-by-five instance where the minimum-rank first step (`A_3`) leads to a
/// shorter sequence than `(A_1, A_2, A_3)`.
pub fn sdpex2() -> SdpProblem {
    let a1 = SparseSym::diag(&[1.0, 1.0, 1.0, 0.0, 0.0]);
    let mut a2 = SparseSym::zeros(5);
    a2.set(2, 3, 1.0);
    a2.set(3, 3, 1.0);
    let a3 = SparseSym::diag(&[0.0, 0.0, 0.0, 1.0, 1.0]);
    SdpProblem::new(5, vec![a1, a2, a3], vec![0.0; 3]).expect("fixed data")
}
