use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};

/// A literal: `+i` for `u_i`, `−i` for its negation (1-based).
pub type Literal = i32;
pub type Clause = [Literal; 3];

/// A 3SAT instance over `u_1..u_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfInstance {
    pub p: usize,
    pub clauses: Vec<Clause>,
    pub preprocessed: bool,
    /// Consecutive identical copies of each original clause (1 when not duplicated).
    pub copies: usize,
}

fn var(l: Literal) -> usize {
    l.unsigned_abs() as usize
}

impl CnfInstance {
    /// Checks literal ranges and that no clause repeats a literal.
    pub fn new(p: usize, clauses: Vec<Clause>) -> Result<Self> {
        for (j, c) in clauses.iter().enumerate() {
            if c.iter().any(|&l| l == 0 || var(l) > p) {
                return Err(Error::Input(format!(
                    "clause {} has a literal outside 1..{p}",
                    j + 1
                )));
            }
            if c[0] == c[1] || c[0] == c[2] || c[1] == c[2] {
                return Err(Error::Input(format!("clause {} repeats a literal", j + 1)));
            }
        }
        Ok(CnfInstance {
            p,
            clauses,
            preprocessed: false,
            copies: 1,
        })
    }

    pub fn q(&self) -> usize {
        self.clauses.len()
    }

    /// Number of distinct clauses before duplication.
    pub fn q_tilde(&self) -> usize {
        self.clauses.len() / self.copies.max(1)
    }

    pub fn is_tautology(c: &Clause) -> bool {
        c.iter().any(|&l| c.contains(&-l))
    }

    /// Every variable occurs with both polarities and no clause mentions a
    /// variable twice.
    pub fn satisfies_assumption(&self) -> bool {
        let mut pos = vec![false; self.p + 1];
        let mut neg = vec![false; self.p + 1];
        for c in &self.clauses {
            let vars: BTreeSet<usize> = c.iter().map(|&l| var(l)).collect();
            if vars.len() != 3 {
                return false;
            }
            for &l in c {
                if l > 0 {
                    pos[var(l)] = true;
                } else {
                    neg[var(l)] = true;
                }
            }
        }
        (1..=self.p).all(|i| pos[i] && neg[i])
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.p, self.clauses.len());
        for c in &self.clauses {
            let _ = writeln!(out, "{} {} {} 0", c[0], c[1], c[2]);
        }
        out
    }
}

/// Parses DIMACS CNF text. Clauses may span lines; `c` lines are comments
/// and a `%` line ends the input.
pub fn parse_dimacs(text: &str) -> Result<CnfInstance> {
    let err = |line: usize, column: usize, message: String| Error::Parse {
        line,
        column,
        message,
    };
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<Literal> = Vec::new();
    let mut clause_line = 0;
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let trimmed = raw.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        if trimmed.starts_with('%') {
            break;
        }
        if trimmed.starts_with('p') {
            if header.is_some() {
                return Err(err(line, 1, "duplicate header".into()));
            }
            let parts: Vec<&str> = trimmed.split_whitespace().collect();
            if parts.len() != 4 || parts[1] != "cnf" {
                return Err(err(line, 1, "expected `p cnf VARS CLAUSES`".into()));
            }
            let num = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| err(line, 1, format!("bad count {s:?}")))
            };
            header = Some((num(parts[2])?, num(parts[3])?));
            continue;
        }
        let (p, _) = header.ok_or_else(|| err(line, 1, "clause before header".into()))?;
        for tok in raw.split_whitespace() {
            let column = tok.as_ptr() as usize - raw.as_ptr() as usize + 1;
            let l: i64 = tok
                .parse()
                .map_err(|_| err(line, column, format!("expected an integer, found {tok:?}")))?;
            if l == 0 {
                match current.len() {
                    0 => return Err(err(line, column, "empty clause".into())),
                    3 => {
                        let c = [current[0], current[1], current[2]];
                        if c[0] == c[1] || c[0] == c[2] || c[1] == c[2] {
                            return Err(Error::NonTernaryClause { line: clause_line });
                        }
                        clauses.push(c);
                    }
                    _ => return Err(Error::NonTernaryClause { line: clause_line }),
                }
                current.clear();
                continue;
            }
            if l.unsigned_abs() as usize > p {
                return Err(err(
                    line,
                    column,
                    format!("literal {l} exceeds the {p} declared variables"),
                ));
            }
            if current.is_empty() {
                clause_line = line;
            }
            current.push(l as Literal);
        }
    }
    let (p, count) = header.ok_or_else(|| err(1, 1, "missing `p cnf` header".into()))?;
    if !current.is_empty() {
        return Err(err(
            text.lines().count(),
            1,
            "last clause is not terminated by 0".into(),
        ));
    }
    if clauses.len() != count {
        return Err(err(
            1,
            1,
            format!(
                "header declares {count} clauses but {} were read",
                clauses.len()
            ),
        ));
    }
    CnfInstance::new(p, clauses)
}

/// Output of [`preprocess`]: the reduced instance over renumbered variables.
#[derive(Clone, Debug)]
pub struct Preprocessed {
    pub cnf: CnfInstance,
    /// `origin[i]` is the input variable behind variable `i + 1`.
    pub origin: Vec<usize>,
    /// Input variables fixed by polarity, with their values.
    pub fixed: BTreeMap<usize, bool>,
    /// Input clauses dropped as tautologies.
    pub tautologies: usize,
}

impl Preprocessed {
    /// All clauses were removed; the input is satisfiable.
    pub fn trivialized(&self) -> bool {
        self.cnf.clauses.is_empty()
    }

    /// An assignment of the reduced instance extended to the input variables.
    pub fn lift(&self, a: &Assignment, p_in: usize) -> Assignment {
        let mut values = vec![false; p_in];
        for (&i, &v) in &self.fixed {
            values[i - 1] = v;
        }
        for (k, &i) in self.origin.iter().enumerate() {
            values[i - 1] = a.values[k];
        }
        Assignment { values }
    }
}

/// Removes tautologies, then fixes every variable missing a polarity, until
/// nothing changes. Variables that survive are renumbered `1..p'` in order.
pub fn preprocess(cnf: &CnfInstance) -> Preprocessed {
    let mut clauses: Vec<Clause> = cnf.clauses.clone();
    let before = clauses.len();
    clauses.retain(|c| !CnfInstance::is_tautology(c));
    let tautologies = before - clauses.len();
    let mut fixed = BTreeMap::new();
    loop {
        let mut pos = vec![false; cnf.p + 1];
        let mut neg = vec![false; cnf.p + 1];
        for c in &clauses {
            for &l in c {
                if l > 0 {
                    pos[var(l)] = true;
                } else {
                    neg[var(l)] = true;
                }
            }
        }
        let mut changed = false;
        for i in 1..=cnf.p {
            if fixed.contains_key(&i) || (pos[i] && neg[i]) {
                continue;
            }
            let value = pos[i];
            fixed.insert(i, value);
            let sat = if value { i as Literal } else { -(i as Literal) };
            let len = clauses.len();
            clauses.retain(|c| !c.contains(&sat));
            changed |= clauses.len() != len;
        }
        if !changed {
            break;
        }
    }
    let origin: Vec<usize> = (1..=cnf.p).filter(|i| !fixed.contains_key(i)).collect();
    let mut rename = vec![0 as Literal; cnf.p + 1];
    for (k, &i) in origin.iter().enumerate() {
        rename[i] = (k + 1) as Literal;
    }
    let clauses = clauses
        .iter()
        .map(|c| c.map(|l| rename[var(l)] * l.signum()))
        .collect();
    Preprocessed {
        cnf: CnfInstance {
            p: origin.len(),
            clauses,
            preprocessed: true,
            copies: 1,
        },
        origin,
        fixed,
        tautologies,
    }
}

/// Replaces each of the `q̃` clauses by `2q̃` consecutive copies.
pub fn duplicate_clauses(cnf: &CnfInstance) -> Result<CnfInstance> {
    if !cnf.preprocessed {
        return Err(Error::NotPreprocessed);
    }
    if cnf.copies != 1 {
        return Err(Error::PreconditionFailed(
            "instance is already duplicated".into(),
        ));
    }
    let qt = cnf.clauses.len();
    let clauses = cnf
        .clauses
        .iter()
        .flat_map(|c| std::iter::repeat_n(*c, 2 * qt))
        .collect();
    Ok(CnfInstance {
        p: cnf.p,
        clauses,
        preprocessed: true,
        copies: if qt == 0 { 1 } else { 2 * qt },
    })
}

/// Truth values of `u_1..u_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    pub values: Vec<bool>,
}

impl Assignment {
    /// Bit `i` of `mask` is the value of `u_{i+1}`.
    pub fn from_mask(p: usize, mask: u64) -> Self {
        Assignment {
            values: (0..p).map(|i| mask >> i & 1 == 1).collect(),
        }
    }

    pub fn literal_true(&self, l: Literal) -> bool {
        self.values[var(l) - 1] == (l > 0)
    }

    /// The first violated clause (0-based), if any.
    pub fn violated(&self, cnf: &CnfInstance) -> Option<usize> {
        cnf.clauses
            .iter()
            .position(|c| !c.iter().any(|&l| self.literal_true(l)))
    }

    pub fn satisfies(&self, cnf: &CnfInstance) -> bool {
        self.violated(cnf).is_none()
    }
}

impl FromStr for Assignment {
    type Err = Error;

    /// Comma-separated `0`/`1` (or `f`/`t`) values.
    fn from_str(s: &str) -> Result<Self> {
        let values = s
            .split(',')
            .map(|t| match t.trim() {
                "1" | "t" | "true" => Ok(true),
                "0" | "f" | "false" => Ok(false),
                other => Err(Error::Input(format!("bad truth value {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Assignment { values })
    }
}

impl std::fmt::Display for Assignment {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<&str> = self
            .values
            .iter()
            .map(|&v| if v { "1" } else { "0" })
            .collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Checks `2^p ≤ budget`.
pub fn check_budget(p: usize, budget: u64) -> Result<()> {
    if p >= 64 || (1u64 << p) > budget {
        return Err(Error::BudgetExceeded { p, budget });
    }
    Ok(())
}

/// The first satisfying assignment in mask order.
pub fn brute_force_sat(cnf: &CnfInstance, budget: u64) -> Result<Option<Assignment>> {
    check_budget(cnf.p, budget)?;
    Ok((0..1u64 << cnf.p)
        .map(|mask| Assignment::from_mask(cnf.p, mask))
        .find(|a| a.satisfies(cnf)))
}

/// All eight sign patterns over `u_1, u_2, u_3`.
pub fn complete_unsat_cnf() -> CnfInstance {
    CnfInstance::new(3, (0..8).map(pattern_clause).collect()).expect("fixed data")
}

/// The clause over `u_1, u_2, u_3` whose bit `v` of `pattern` makes `u_{v+1}` positive.
pub fn pattern_clause(pattern: u8) -> Clause {
    let lit = |v: u8| {
        if pattern >> v & 1 == 1 {
            (v + 1) as Literal
        } else {
            -((v + 1) as Literal)
        }
    };
    [lit(0), lit(1), lit(2)]
}

fn canonical_patterns(set: &[u8]) -> Vec<u8> {
    const PERMS: [[u8; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let mut best: Option<Vec<u8>> = None;
    for perm in PERMS {
        for flip in 0..8u8 {
            let mut img: Vec<u8> = set
                .iter()
                .map(|&s| {
                    let moved = (0..3).fold(0u8, |acc, v| acc | (s >> v & 1) << perm[v as usize]);
                    moved ^ flip
                })
                .collect();
            img.sort_unstable();
            if best.as_ref().is_none_or(|b| img < *b) {
                best = Some(img);
            }
        }
    }
    best.unwrap_or_default()
}

/// One representative per class, under renaming and negating variables, of
/// the sets of `k ∈ [k_min, k_max]` distinct clauses over `u_1, u_2, u_3`
/// satisfying the occurrence assumption; at most `cap` instances.
pub fn enumerate_three_variable_cnfs(k_min: usize, k_max: usize, cap: usize) -> Vec<CnfInstance> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for subset in 0u16..256 {
        let set: Vec<u8> = (0..8u8).filter(|&s| subset >> s & 1 == 1).collect();
        if set.len() < k_min || set.len() > k_max || out.len() >= cap {
            continue;
        }
        let both = (0..3)
            .all(|v| set.iter().any(|&s| s >> v & 1 == 1) && set.iter().any(|&s| s >> v & 1 == 0));
        if !both || !seen.insert(canonical_patterns(&set)) {
            continue;
        }
        let mut cnf = CnfInstance::new(3, set.iter().map(|&s| pattern_clause(s)).collect())
            .expect("valid patterns");
        cnf.preprocessed = true;
        out.push(cnf);
    }
    out
}

/// A random instance with `3 ≤ p ≤ p_max` and `1 ≤ q ≤ q_max` clauses over
/// distinct variables, satisfied by a planted assignment.
pub fn random_satisfiable_cnf<R: Rng>(rng: &mut R, p_max: usize, q_max: usize) -> CnfInstance {
    let p = rng.random_range(3..=p_max.max(3));
    let q = rng.random_range(1..=q_max.max(1));
    let planted = Assignment::from_mask(p, rng.random_range(0..1u64 << p));
    let mut vars: Vec<usize> = (1..=p).collect();
    let clauses = (0..q)
        .map(|_| loop {
            vars.shuffle(rng);
            let c: Clause = [0, 1, 2].map(|k| {
                let v = vars[k] as Literal;
                if rng.random_bool(0.5) {
                    v
                } else {
                    -v
                }
            });
            if c.iter().any(|&l| planted.literal_true(l)) {
                break c;
            }
        })
        .collect();
    CnfInstance::new(p, clauses).expect("literals in range")
}

/// A preprocessed, non-trivial satisfiable instance, drawn by rejection.
pub fn random_preprocessed_satisfiable<R: Rng>(
    rng: &mut R,
    p_max: usize,
    q_max: usize,
) -> CnfInstance {
    loop {
        let pre = preprocess(&random_satisfiable_cnf(rng, p_max, q_max));
        if !pre.trivialized() {
            return pre.cnf;
        }
    }
}
