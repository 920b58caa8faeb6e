//! Two-phase primal simplex over exact rationals with Bland's anti-cycling rule.

use serde::{Deserialize, Serialize};

use super::{Rational, RationalMatrix};
use crate::error::{Error, Result};

/// `maximize cᵀx subject to A x = b, x ≥ 0`.
#[derive(Clone, Debug)]
pub struct StandardLp {
    pub a: RationalMatrix,
    pub b: Vec<Rational>,
    pub c: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StandardOutcome {
    Optimal {
        value: Rational,
        x: Vec<Rational>,
        /// Indices of the basic columns at the optimum (redundant rows dropped).
        basis: Vec<usize>,
    },
    Infeasible,
    Unbounded,
}

/// General LP over free variables: maximize `objective · x` subject to
/// equalities `a · x = rhs` and inequalities `a · x ≥ rhs`.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct LpTask {
    pub objective: Vec<Rational>,
    pub equalities: Vec<(Vec<Rational>, Rational)>,
    pub inequalities_geq: Vec<(Vec<Rational>, Rational)>,
    pub num_vars: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal {
        value: Rational,
        point: Vec<Rational>,
    },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn is_optimal(&self) -> bool {
        matches!(self, LpOutcome::Optimal { .. })
    }
}

struct Tableau {
    /// Constraint rows; the last entry of each row is the right-hand side.
    rows: Vec<Vec<Rational>>,
    /// Basic variable of each row. Values `>= n` denote artificials.
    basis: Vec<usize>,
    /// Reduced costs `c_j - z_j` of the structural columns.
    reduced: Vec<Rational>,
    value: Rational,
    n: usize,
    /// Bland priority of each structural column (lower enters first).
    rank: Vec<usize>,
}

impl Tableau {
    fn rhs(&self, r: usize) -> &Rational {
        &self.rows[r][self.n]
    }

    fn priority(&self, var: usize) -> usize {
        if var < self.n {
            self.rank[var]
        } else {
            self.n + var
        }
    }

    fn pivot(&mut self, r: usize, e: usize) {
        let n = self.n;
        let inv = self.rows[r][e].recip();
        if inv != Rational::one() {
            for v in self.rows[r].iter_mut() {
                if !v.is_zero() {
                    *v = &*v * &inv;
                }
            }
        }
        let pivot_row: Vec<(usize, Rational)> = self.rows[r]
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(k, v)| (k, v.clone()))
            .collect();
        for i in 0..self.rows.len() {
            if i == r {
                continue;
            }
            let factor = self.rows[i][e].clone();
            if factor.is_zero() {
                continue;
            }
            let row = &mut self.rows[i];
            for (k, v) in &pivot_row {
                row[*k] -= &(&factor * v);
            }
        }
        let factor = self.reduced[e].clone();
        if !factor.is_zero() {
            for (k, v) in &pivot_row {
                if *k < n {
                    self.reduced[*k] -= &(&factor * v);
                } else {
                    self.value += &(&factor * v);
                }
            }
        }
        self.basis[r] = e;
    }

    /// Runs simplex iterations on the current reduced costs. Returns `false`
    /// when the objective is unbounded.
    fn iterate(&mut self, allowed: &[bool]) -> bool {
        loop {
            let entering = (0..self.n)
                .filter(|&j| allowed[j] && self.reduced[j].is_positive())
                .min_by_key(|&j| self.rank[j]);
            let Some(e) = entering else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][e];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(r) / a;
                let better = match &best {
                    None => true,
                    Some((br, bv)) => {
                        ratio < *bv
                            || (ratio == *bv
                                && self.priority(self.basis[r]) < self.priority(self.basis[*br]))
                    }
                };
                if better {
                    best = Some((r, ratio));
                }
            }
            let Some((r, _)) = best else {
                return false;
            };
            self.pivot(r, e);
        }
    }
}

/// Solves a standard-form LP. `order`, when given, is a permutation of the
/// columns used as Bland's priority; it changes which optimal vertex is
/// returned but never the verdict or the optimal value.
pub fn solve_standard(lp: &StandardLp, order: Option<&[usize]>) -> Result<StandardOutcome> {
    let m = lp.a.rows();
    let n = lp.a.cols();
    if lp.b.len() != m || lp.c.len() != n {
        return Err(Error::MalformedTask(format!(
            "standard LP with {m}x{n} matrix, {} rhs, {} costs",
            lp.b.len(),
            lp.c.len()
        )));
    }
    let mut rank: Vec<usize> = (0..n).collect();
    if let Some(order) = order {
        if order.len() != n {
            return Err(Error::MalformedTask(
                "priority order has wrong length".into(),
            ));
        }
        for (pos, &col) in order.iter().enumerate() {
            rank[col] = pos;
        }
    }

    let mut rows = Vec::with_capacity(m);
    for r in 0..m {
        let mut row: Vec<Rational> = lp.a.row(r).to_vec();
        row.push(lp.b[r].clone());
        if lp.b[r].is_negative() {
            for v in row.iter_mut() {
                *v = -&*v;
            }
        }
        rows.push(row);
    }
    // Phase one: maximize minus the sum of artificials.
    let mut reduced = vec![Rational::zero(); n];
    let mut value = Rational::zero();
    for row in &rows {
        for (j, v) in row[..n].iter().enumerate() {
            if !v.is_zero() {
                reduced[j] += v;
            }
        }
        value -= &row[n];
    }
    let mut t = Tableau {
        rows,
        basis: (n..n + m).collect(),
        reduced,
        value,
        n,
        rank,
    };
    let allowed = vec![true; n];
    t.iterate(&allowed);
    if !t.value.is_zero() {
        return Ok(StandardOutcome::Infeasible);
    }
    // Drive zero-level artificials out of the basis; drop redundant rows.
    let mut r = 0;
    while r < t.rows.len() {
        if t.basis[r] >= n {
            let col = (0..n)
                .filter(|&j| !t.rows[r][j].is_zero())
                .min_by_key(|&j| t.rank[j]);
            match col {
                Some(j) => {
                    t.pivot(r, j);
                    r += 1;
                }
                None => {
                    t.rows.swap_remove(r);
                    t.basis.swap_remove(r);
                }
            }
        } else {
            r += 1;
        }
    }

    // Phase two.
    let mut reduced = lp.c.clone();
    let mut value = Rational::zero();
    for (row, &bv) in t.rows.iter().zip(&t.basis) {
        let cb = &lp.c[bv];
        if cb.is_zero() {
            continue;
        }
        for (j, v) in row[..n].iter().enumerate() {
            if !v.is_zero() {
                reduced[j] -= &(cb * v);
            }
        }
        value += &(cb * &row[n]);
    }
    t.reduced = reduced;
    t.value = value;
    if !t.iterate(&allowed) {
        return Ok(StandardOutcome::Unbounded);
    }
    let mut x = vec![Rational::zero(); n];
    for (row, &bv) in t.rows.iter().zip(&t.basis) {
        x[bv] = row[n].clone();
    }
    let value = super::matrix::dot(&lp.c, &x);
    let mut basis = t.basis.clone();
    basis.sort_unstable();
    Ok(StandardOutcome::Optimal { value, x, basis })
}

/// Some `x ≥ 0` with `A x = b`, found by phase one only.
pub fn find_feasible(
    a: &RationalMatrix,
    b: &[Rational],
    order: Option<&[usize]>,
) -> Result<Option<Vec<Rational>>> {
    let lp = StandardLp {
        a: a.clone(),
        b: b.to_vec(),
        c: vec![Rational::zero(); a.cols()],
    };
    Ok(match solve_standard(&lp, order)? {
        StandardOutcome::Optimal { x, .. } => Some(x),
        _ => None,
    })
}

/// Solves an [`LpTask`] with free variables exactly.
pub fn lp_solve(task: &LpTask) -> Result<LpOutcome> {
    let n = task.num_vars;
    if task.objective.len() != n {
        return Err(Error::MalformedTask(format!(
            "objective has length {} but the task has {n} variables",
            task.objective.len()
        )));
    }
    for (coef, _) in task.equalities.iter().chain(&task.inequalities_geq) {
        if coef.len() != n {
            return Err(Error::MalformedTask(format!(
                "constraint has length {} but the task has {n} variables",
                coef.len()
            )));
        }
    }
    if n == 0 {
        let holds = task.equalities.iter().all(|(_, rhs)| rhs.is_zero())
            && task
                .inequalities_geq
                .iter()
                .all(|(_, rhs)| !rhs.is_positive());
        return Ok(if holds {
            LpOutcome::Optimal {
                value: Rational::zero(),
                point: Vec::new(),
            }
        } else {
            LpOutcome::Infeasible
        });
    }

    // Columns: x⁺ (n), x⁻ (n), one surplus per inequality.
    let k = task.inequalities_geq.len();
    let cols = 2 * n + k;
    let mut rows = Vec::with_capacity(task.equalities.len() + k);
    let mut rhs = Vec::with_capacity(rows.capacity());
    let split = |coef: &[Rational]| {
        let mut row = Vec::with_capacity(cols);
        row.extend(coef.iter().cloned());
        row.extend(coef.iter().map(|v| -v));
        row
    };
    for (coef, b) in &task.equalities {
        let mut row = split(coef);
        row.resize(cols, Rational::zero());
        rows.push(row);
        rhs.push(b.clone());
    }
    for (i, (coef, b)) in task.inequalities_geq.iter().enumerate() {
        let mut row = split(coef);
        row.resize(cols, Rational::zero());
        row[2 * n + i] = Rational::from_integer(-1);
        rows.push(row);
        rhs.push(b.clone());
    }
    let mut c = split(&task.objective);
    c.resize(cols, Rational::zero());
    let lp = StandardLp {
        a: RationalMatrix::from_rows_with_cols(rows, cols),
        b: rhs,
        c,
    };
    Ok(match solve_standard(&lp, None)? {
        StandardOutcome::Optimal { x, .. } => {
            let point: Vec<Rational> = (0..n).map(|j| &x[j] - &x[n + j]).collect();
            let value = super::matrix::dot(&task.objective, &point);
            LpOutcome::Optimal { value, point }
        }
        StandardOutcome::Infeasible => LpOutcome::Infeasible,
        StandardOutcome::Unbounded => LpOutcome::Unbounded,
    })
}
