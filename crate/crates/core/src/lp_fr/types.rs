use std::collections::BTreeSet;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::kernel::{dot, Rational, RationalMatrix};

/// The affine set `L = {x : A x = b}` with exact data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSet {
    a: RationalMatrix,
    b: Vec<Rational>,
}

impl LinearSet {
    pub fn new(a: RationalMatrix, b: Vec<Rational>) -> Result<Self> {
        if a.rows() != b.len() {
            return Err(Error::DimensionMismatch(format!(
                "A has {} rows but b has length {}",
                a.rows(),
                b.len()
            )));
        }
        if a.cols() == 0 {
            return Err(Error::DimensionMismatch("a linear set needs n >= 1".into()));
        }
        Ok(LinearSet { a, b })
    }

    /// Homogeneous set `{x : A x = 0}`.
    pub fn homogeneous(a: RationalMatrix) -> Result<Self> {
        let m = a.rows();
        Self::new(a, vec![Rational::zero(); m])
    }

    pub fn from_i64(a: &[Vec<i64>], b: &[i64]) -> Result<Self> {
        let n = a.first().map_or(0, Vec::len);
        let rows = a
            .iter()
            .map(|r| r.iter().map(|&v| Rational::from_integer(v)).collect())
            .collect();
        Self::new(
            RationalMatrix::from_rows_with_cols(rows, n),
            b.iter().map(|&v| Rational::from_integer(v)).collect(),
        )
    }

    pub fn a(&self) -> &RationalMatrix {
        &self.a
    }

    pub fn b(&self) -> &[Rational] {
        &self.b
    }

    pub fn n(&self) -> usize {
        self.a.cols()
    }

    pub fn m(&self) -> usize {
        self.a.rows()
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.a.mul_vec(x) == self.b
    }

    /// `Aᵀ y`, the element of `L^⊥` carried by the multiplier `y` when `bᵀy = 0`.
    pub fn exposed_by(&self, y: &[Rational]) -> Vec<Rational> {
        self.a.transpose_mul_vec(y)
    }

    /// Drops column `var`; the row data and `b` are unchanged.
    pub fn without_variable(&self, var: usize) -> Result<LinearSet> {
        if self.n() < 2 {
            return Err(Error::PreconditionFailed(
                "cannot remove the last variable".into(),
            ));
        }
        LinearSet::new(self.a.remove_column(var), self.b.clone())
    }

    /// Whether `e_var ∈ L^⊥`, i.e. some `y` has `Aᵀy = e_var` and `bᵀy = 0`.
    pub fn unit_in_perp(&self, var: usize) -> bool {
        let m = self.m();
        let mut rows: Vec<Vec<Rational>> = (0..self.n()).map(|c| self.a.column(c)).collect();
        rows.push(self.b.clone());
        let system = RationalMatrix::from_rows_with_cols(rows, m);
        let mut rhs = vec![Rational::zero(); self.n() + 1];
        rhs[var] = Rational::one();
        system.solve(&rhs).is_some()
    }
}

#[derive(Serialize, Deserialize)]
struct LinearSetJson {
    n: usize,
    m: usize,
    #[serde(rename = "A")]
    a: Vec<Vec<Rational>>,
    b: Vec<Rational>,
}

impl Serialize for LinearSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        LinearSetJson {
            n: self.n(),
            m: self.m(),
            a: self.a.to_rows(),
            b: self.b.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LinearSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = LinearSetJson::deserialize(deserializer)?;
        if raw.a.len() != raw.m || raw.b.len() != raw.m {
            return Err(D::Error::custom("row count disagrees with m"));
        }
        if raw.a.iter().any(|r| r.len() != raw.n) {
            return Err(D::Error::custom("row length disagrees with n"));
        }
        let a = RationalMatrix::from_rows_with_cols(raw.a, raw.n);
        LinearSet::new(a, raw.b).map_err(D::Error::custom)
    }
}

/// A face `{x ∈ R^n_+ : x(S) = 0}` of the nonnegative orthant, stored by its
/// zero set `S` (0-based).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrthantFace {
    n: usize,
    zero_set: BTreeSet<usize>,
}

impl OrthantFace {
    pub fn full(n: usize) -> Self {
        OrthantFace {
            n,
            zero_set: BTreeSet::new(),
        }
    }

    pub fn new(n: usize, zero_set: impl IntoIterator<Item = usize>) -> Result<Self> {
        let zero_set: BTreeSet<usize> = zero_set.into_iter().collect();
        if let Some(&bad) = zero_set.iter().find(|&&i| i >= n) {
            return Err(Error::DimensionMismatch(format!(
                "index {bad} outside 0..{n}"
            )));
        }
        Ok(OrthantFace { n, zero_set })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn zero_set(&self) -> &BTreeSet<usize> {
        &self.zero_set
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.n).filter(|i| !self.zero_set.contains(i)).collect()
    }

    pub fn in_support(&self, i: usize) -> bool {
        i < self.n && !self.zero_set.contains(&i)
    }

    pub fn dim(&self) -> usize {
        self.n - self.zero_set.len()
    }

    pub fn is_zero_face(&self) -> bool {
        self.zero_set.len() == self.n
    }

    /// `self ∩ {x : x(extra) = 0}`.
    pub fn with_zeros(&self, extra: impl IntoIterator<Item = usize>) -> Self {
        let mut zero_set = self.zero_set.clone();
        zero_set.extend(extra);
        OrthantFace {
            n: self.n,
            zero_set,
        }
    }

    /// 1-based zero indices, as used in the JSON formats.
    pub fn zero_set_one_based(&self) -> Vec<usize> {
        self.zero_set.iter().map(|i| i + 1).collect()
    }
}

/// Certificate `w = Aᵀy` with `bᵀy = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LpExposingVector {
    pub y: Vec<Rational>,
    pub w: Vec<Rational>,
}

impl LpExposingVector {
    /// Builds the certificate carried by `y`.
    pub fn from_multiplier(set: &LinearSet, y: Vec<Rational>) -> Self {
        let w = set.exposed_by(&y);
        LpExposingVector { y, w }
    }

    /// Checks membership in `L^⊥ ∩ (F* \ F^⊥)` and returns the exposed set
    /// `supp(w) ∩ supp(F)`.
    pub fn check(
        &self,
        set: &LinearSet,
        face: &OrthantFace,
    ) -> std::result::Result<Vec<usize>, String> {
        if self.y.len() != set.m() || self.w.len() != set.n() || face.n() != set.n() {
            return Err("certificate dimensions disagree with the linear set".into());
        }
        if set.exposed_by(&self.y) != self.w {
            return Err("w differs from Aᵀy".into());
        }
        if !dot(set.b(), &self.y).is_zero() {
            return Err("bᵀy is nonzero".into());
        }
        let mut exposed = Vec::new();
        for i in face.support() {
            let wi = &self.w[i];
            if wi.is_negative() {
                return Err(format!(
                    "w is negative at index {} of the face support",
                    i + 1
                ));
            }
            if wi.is_positive() {
                exposed.push(i);
            }
        }
        if exposed.is_empty() {
            return Err("w vanishes on the face (lies in F^⊥)".into());
        }
        Ok(exposed)
    }

    /// Drops coordinate `var` of `w` (the multiplier is unchanged).
    pub fn truncated(&self, var: usize) -> Self {
        let mut w = self.w.clone();
        w.remove(var);
        LpExposingVector {
            y: self.y.clone(),
            w,
        }
    }
}

/// An FR sequence over the orthant with its face chain (`faces.len() == steps.len() + 1`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FRSequenceLP {
    pub steps: Vec<LpExposingVector>,
    pub faces: Vec<OrthantFace>,
}

impl FRSequenceLP {
    pub fn empty(start: OrthantFace) -> Self {
        FRSequenceLP {
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

    pub fn final_face(&self) -> &OrthantFace {
        self.faces.last().expect("face chain is never empty")
    }

    /// Indices zeroed at step `i` (0-based): `zero(F_{i+1}) \ zero(F_i)`.
    pub fn block(&self, i: usize) -> Vec<usize> {
        self.faces[i + 1]
            .zero_set()
            .difference(self.faces[i].zero_set())
            .copied()
            .collect()
    }
}

#[derive(Serialize, Deserialize)]
struct SequenceJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    steps: Vec<LpExposingVector>,
    faces: Vec<Vec<usize>>,
}

impl Serialize for FRSequenceLP {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SequenceJson {
            n: self.faces.first().map(OrthantFace::n),
            steps: self.steps.clone(),
            faces: self
                .faces
                .iter()
                .map(OrthantFace::zero_set_one_based)
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FRSequenceLP {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = SequenceJson::deserialize(deserializer)?;
        let n = raw
            .n
            .or_else(|| raw.steps.first().map(|s| s.w.len()))
            .ok_or_else(|| D::Error::custom("an empty sequence needs an explicit n"))?;
        if raw.faces.len() != raw.steps.len() + 1 {
            return Err(D::Error::custom(
                "faces must have one more entry than steps",
            ));
        }
        let faces = raw
            .faces
            .into_iter()
            .map(|zs| {
                if zs.contains(&0) {
                    return Err(D::Error::custom("face indices are 1-based"));
                }
                OrthantFace::new(n, zs.into_iter().map(|i| i - 1)).map_err(D::Error::custom)
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(FRSequenceLP {
            steps: raw.steps,
            faces,
        })
    }
}
