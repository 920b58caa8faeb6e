//! Exposing-vector search over orthant faces.
//!
//! At a face `F` with support `S`, the restrictions `w(S)` of elements of
//! `L^⊥` form the subspace `{u ∈ R^S : G u = 0}`, where the rows of `G` span
//! `{x ∈ R^S : A_S x ∈ span(b)}`. Every search below works in these `|S|`
//! coordinates and recovers a multiplier `y` with `A_Sᵀy = w(S)`, `bᵀy = 0`
//! afterwards.
//!
//! Minimality by single drops: if `u` realizes an exposed set strictly inside
//! `T` then `u` itself is a certificate whose support avoids some `j ∈ T`, so
//! testing each `T \ {j}` for a nonempty realizable subset is exact.

use crate::error::{Error, Result};
use crate::kernel::simplex::find_feasible;
use crate::kernel::{
    lp_solve, LpOutcome, LpTask, Rational, RationalMatrix, StandardLp, StandardOutcome,
};

use super::types::{LinearSet, LpExposingVector, OrthantFace};

/// Priority order over `0..n` used to break ties; `None` means ascending.
pub type TieBreak<'a> = Option<&'a [usize]>;

pub(crate) struct FaceCone<'a> {
    set: &'a LinearSet,
    support: Vec<usize>,
    /// Rows span the vectors `x ∈ R^S` annihilated by every `w(S)`.
    g: RationalMatrix,
}

impl<'a> FaceCone<'a> {
    pub(crate) fn new(set: &'a LinearSet, face: &OrthantFace) -> Self {
        let support = face.support();
        let s = support.len();
        let m = set.m();
        let mut aug = RationalMatrix::zeros(m, s + 1);
        for r in 0..m {
            for (k, &i) in support.iter().enumerate() {
                aug.set(r, k, set.a().get(r, i).clone());
            }
            aug.set(r, s, -&set.b()[r]);
        }
        let rows: Vec<Vec<Rational>> = aug
            .nullspace()
            .into_iter()
            .map(|mut v| {
                v.truncate(s);
                v
            })
            .filter(|v| v.iter().any(|x| !x.is_zero()))
            .collect();
        let g = RationalMatrix::from_rows_with_cols(rows, s).row_basis();
        FaceCone { set, support, g }
    }

    pub(crate) fn support(&self) -> &[usize] {
        &self.support
    }

    /// Positions (into `support`) sorted by tie-break priority.
    fn ranked(&self, positions: &[usize], order: TieBreak) -> Vec<usize> {
        let mut out = positions.to_vec();
        if let Some(order) = order {
            let mut rank = vec![usize::MAX; self.set.n()];
            for (r, &i) in order.iter().enumerate() {
                rank[i] = r;
            }
            out.sort_by_key(|&p| (rank[self.support[p]], p));
        }
        out
    }

    /// A vertex of `{u ≥ 0 on allowed, u = 0 elsewhere, G u = 0, Σ u = 1}`,
    /// returned over all of `support`.
    pub(crate) fn vertex_on(
        &self,
        allowed: &[usize],
        order: TieBreak,
    ) -> Result<Option<Vec<Rational>>> {
        if allowed.is_empty() {
            return Ok(None);
        }
        let cols = self.ranked(allowed, order);
        let gt = self.g.select_columns(&cols).row_basis();
        let mut rows = gt.to_rows();
        rows.push(vec![Rational::one(); cols.len()]);
        let mut rhs = vec![Rational::zero(); rows.len()];
        *rhs.last_mut().unwrap() = Rational::one();
        let a = RationalMatrix::from_rows_with_cols(rows, cols.len());
        let Some(u) = find_feasible(&a, &rhs, None)? else {
            return Ok(None);
        };
        let mut full = vec![Rational::zero(); self.support.len()];
        for (k, &p) in cols.iter().enumerate() {
            full[p] = u[k].clone();
        }
        Ok(Some(full))
    }

    /// Maximizes `Σ_{p ∈ target} u_p` over `{u ≥ 0, G u = 0, Σ u ≤ 1}`.
    fn max_on(&self, target: &[bool]) -> Result<Vec<Rational>> {
        let s = self.support.len();
        let mut rows = self.g.to_rows();
        for r in rows.iter_mut() {
            r.push(Rational::zero());
        }
        rows.push(vec![Rational::one(); s + 1]);
        let mut b = vec![Rational::zero(); rows.len()];
        *b.last_mut().unwrap() = Rational::one();
        let mut c: Vec<Rational> = target
            .iter()
            .map(|&t| if t { Rational::one() } else { Rational::zero() })
            .collect();
        c.push(Rational::zero());
        let lp = StandardLp {
            a: RationalMatrix::from_rows_with_cols(rows, s + 1),
            b,
            c,
        };
        match crate::kernel::simplex::solve_standard(&lp, None)? {
            StandardOutcome::Optimal { mut x, .. } => {
                x.truncate(s);
                Ok(x)
            }
            _ => Err(Error::PreconditionFailed(
                "bounded exposing LP reported no optimum".into(),
            )),
        }
    }

    /// Builds the certificate whose restriction to the support is `u`.
    pub(crate) fn certificate(&self, u: &[Rational]) -> Result<LpExposingVector> {
        let m = self.set.m();
        let mut rows: Vec<Vec<Rational>> = self
            .support
            .iter()
            .map(|&i| (0..m).map(|r| self.set.a().get(r, i).clone()).collect())
            .collect();
        rows.push(self.set.b().to_vec());
        let mut rhs = u.to_vec();
        rhs.push(Rational::zero());
        let y = RationalMatrix::from_rows_with_cols(rows, m)
            .solve(&rhs)
            .ok_or_else(|| Error::PreconditionFailed("exposing vector lies outside L^⊥".into()))?;
        Ok(LpExposingVector::from_multiplier(self.set, y))
    }
}

fn positions_of(u: &[Rational]) -> Vec<usize> {
    (0..u.len()).filter(|&p| u[p].is_positive()).collect()
}

/// Some exposing vector for `(L, F)` normalized so that `Σ_{supp F} w = 1`,
/// or `None` when `L` meets the relative interior of `F`.
pub fn find_exposing(set: &LinearSet, face: &OrthantFace) -> Result<Option<LpExposingVector>> {
    check_face(set, face)?;
    let cone = FaceCone::new(set, face);
    let all: Vec<usize> = (0..cone.support().len()).collect();
    match cone.vertex_on(&all, None)? {
        Some(u) => Ok(Some(cone.certificate(&u)?)),
        None => Ok(None),
    }
}

/// A minimal exposing vector: no exposing vector for `(L, F)` has an exposed
/// set strictly inside this one's.
pub fn find_minimal_exposing(
    set: &LinearSet,
    face: &OrthantFace,
) -> Result<Option<LpExposingVector>> {
    find_minimal_exposing_ordered(set, face, None)
}

/// [`find_minimal_exposing`] with an explicit tie-break priority over `0..n`.
/// Indices earlier in `order` are preferred for entering the basis and are
/// tried first when shrinking.
pub fn find_minimal_exposing_ordered(
    set: &LinearSet,
    face: &OrthantFace,
    order: TieBreak,
) -> Result<Option<LpExposingVector>> {
    check_face(set, face)?;
    check_order(set.n(), order)?;
    let cone = FaceCone::new(set, face);
    let all: Vec<usize> = (0..cone.support().len()).collect();
    let Some(mut u) = cone.vertex_on(&all, order)? else {
        return Ok(None);
    };
    let mut exposed = positions_of(&u);
    for j in cone.ranked(&all, order) {
        if exposed.len() <= 1 || !exposed.contains(&j) {
            continue;
        }
        let rest: Vec<usize> = exposed.iter().copied().filter(|&p| p != j).collect();
        if let Some(v) = cone.vertex_on(&rest, order)? {
            exposed = positions_of(&v);
            u = v;
        }
    }
    Ok(Some(cone.certificate(&u)?))
}

/// An exposing vector of maximum support on `supp(F)`, built by repeatedly
/// maximizing the mass on still-uncovered indices.
pub fn max_support_exposing(
    set: &LinearSet,
    face: &OrthantFace,
) -> Result<Option<LpExposingVector>> {
    check_face(set, face)?;
    let cone = FaceCone::new(set, face);
    let s = cone.support().len();
    let mut covered = vec![false; s];
    let mut acc = vec![Rational::zero(); s];
    loop {
        let target: Vec<bool> = covered.iter().map(|c| !c).collect();
        if !target.iter().any(|&t| t) {
            break;
        }
        let u = cone.max_on(&target)?;
        if !(0..s).any(|p| target[p] && u[p].is_positive()) {
            break;
        }
        for p in 0..s {
            if u[p].is_positive() {
                covered[p] = true;
                acc[p] += &u[p];
            }
        }
    }
    let total: Rational = acc.iter().cloned().sum();
    if total.is_zero() {
        return Ok(None);
    }
    let inv = total.recip();
    let u: Vec<Rational> = acc.iter().map(|v| v * &inv).collect();
    Ok(Some(cone.certificate(&u)?))
}

/// Whether `w` is minimal for `(L, F)`. Each dropped index is tested with an
/// LP over the multiplier `y` directly.
pub fn is_minimal_step(set: &LinearSet, face: &OrthantFace, w: &LpExposingVector) -> Result<bool> {
    check_face(set, face)?;
    let exposed = w.check(set, face).map_err(Error::InvalidCertificate)?;
    let support = face.support();
    for &j in &exposed {
        let keep: Vec<usize> = exposed.iter().copied().filter(|&i| i != j).collect();
        if keep.is_empty() {
            continue;
        }
        if y_space_normalized(set, &support, &keep)?.is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn a_column(set: &LinearSet, i: usize) -> Vec<Rational> {
    set.a().column(i)
}

/// Some `y` with `bᵀy = 0`, `(Aᵀy)_i = 0` on `support \ keep`,
/// `(Aᵀy)_i ≥ 0` on `keep` and `Σ_keep (Aᵀy)_i = 1`.
pub(crate) fn y_space_normalized(
    set: &LinearSet,
    support: &[usize],
    keep: &[usize],
) -> Result<Option<Vec<Rational>>> {
    let m = set.m();
    let mut task = LpTask {
        objective: vec![Rational::zero(); m],
        num_vars: m,
        ..Default::default()
    };
    task.equalities.push((set.b().to_vec(), Rational::zero()));
    let mut sum = vec![Rational::zero(); m];
    for &i in support {
        let col = a_column(set, i);
        if keep.contains(&i) {
            for (s, c) in sum.iter_mut().zip(&col) {
                *s += c;
            }
            task.inequalities_geq.push((col, Rational::zero()));
        } else {
            task.equalities.push((col, Rational::zero()));
        }
    }
    task.equalities.push((sum, Rational::one()));
    Ok(match lp_solve(&task)? {
        LpOutcome::Optimal { point, .. } => Some(point),
        _ => None,
    })
}

/// Some `y` with `bᵀy = 0`, `(Aᵀy)_i = 0` on `support \ exposed` and
/// `(Aᵀy)_i ≥ 1` on `exposed`.
pub(crate) fn y_space_exact(
    set: &LinearSet,
    support: &[usize],
    exposed: &[usize],
) -> Result<Option<Vec<Rational>>> {
    let m = set.m();
    let mut task = LpTask {
        objective: vec![Rational::zero(); m],
        num_vars: m,
        ..Default::default()
    };
    task.equalities.push((set.b().to_vec(), Rational::zero()));
    for &i in support {
        let col = a_column(set, i);
        if exposed.contains(&i) {
            task.inequalities_geq.push((col, Rational::one()));
        } else {
            task.equalities.push((col, Rational::zero()));
        }
    }
    Ok(match lp_solve(&task)? {
        LpOutcome::Optimal { point, .. } => Some(point),
        _ => None,
    })
}

pub(crate) fn check_face(set: &LinearSet, face: &OrthantFace) -> Result<()> {
    if face.n() != set.n() {
        return Err(Error::DimensionMismatch(format!(
            "face lives in R^{} but the linear set in R^{}",
            face.n(),
            set.n()
        )));
    }
    Ok(())
}

pub(crate) fn check_order(n: usize, order: TieBreak) -> Result<()> {
    if let Some(order) = order {
        let mut seen = vec![false; n];
        if order.len() != n
            || order
                .iter()
                .any(|&i| i >= n || std::mem::replace(&mut seen[i], true))
        {
            return Err(Error::MalformedTask(
                "tie-break order must be a permutation of 0..n".into(),
            ));
        }
    }
    Ok(())
}
