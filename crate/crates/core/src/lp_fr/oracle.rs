//! Exhaustive search over face chains, independent of the greedy algorithm.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::kernel::Rational;

use super::exposing::y_space_exact;
use super::types::{LinearSet, LpExposingVector, OrthantFace};

pub const DEFAULT_BRUTE_CAP: usize = 12;

/// One realizable step out of a face: the exposed set and a multiplier
/// realizing it.
#[derive(Clone, Debug)]
pub struct Branch {
    pub exposed: u64,
    pub y: Vec<Rational>,
}

/// Memoized search state keyed by zero-set bitmask.
#[derive(Clone, Debug, Default)]
pub struct Exploration {
    n: usize,
    pub depth: HashMap<u64, usize>,
    pub branches: HashMap<u64, Vec<Branch>>,
}

impl Exploration {
    pub fn msd(&self) -> usize {
        self.depth[&0]
    }

    pub fn face(&self, mask: u64) -> OrthantFace {
        OrthantFace::new(self.n, (0..self.n).filter(|i| mask >> i & 1 == 1)).expect("mask fits n")
    }

    /// Every `(face, step)` pair lying on some chain of maximum length.
    pub fn longest_chain_steps(&self, set: &LinearSet) -> Vec<(OrthantFace, LpExposingVector)> {
        let mut out = Vec::new();
        let mut stack = vec![0u64];
        let mut seen = std::collections::HashSet::new();
        while let Some(mask) = stack.pop() {
            if !seen.insert(mask) {
                continue;
            }
            let d = self.depth[&mask];
            for br in &self.branches[&mask] {
                let child = mask | br.exposed;
                if self.depth[&child] + 1 == d {
                    out.push((
                        self.face(mask),
                        LpExposingVector::from_multiplier(set, br.y.clone()),
                    ));
                    stack.push(child);
                }
            }
        }
        out
    }
}

/// Exact maximum singularity degree by enumerating every realizable exposed
/// set at every reachable face.
pub fn brute_force_msd(set: &LinearSet, cap_n: usize) -> Result<usize> {
    Ok(brute_force_explore(set, cap_n)?.msd())
}

pub fn brute_force_explore(set: &LinearSet, cap_n: usize) -> Result<Exploration> {
    let n = set.n();
    if n > cap_n || n >= 64 {
        return Err(Error::TooLarge {
            n,
            cap: cap_n.min(63),
        });
    }
    let mut ex = Exploration {
        n,
        ..Default::default()
    };
    visit(set, 0, &mut ex)?;
    Ok(ex)
}

fn visit(set: &LinearSet, mask: u64, ex: &mut Exploration) -> Result<usize> {
    if let Some(&d) = ex.depth.get(&mask) {
        return Ok(d);
    }
    let n = set.n();
    let support: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 0).collect();
    let k = support.len();
    let mut branches = Vec::new();
    for sub in 1u64..(1u64 << k) {
        let exposed: Vec<usize> = (0..k)
            .filter(|b| sub >> b & 1 == 1)
            .map(|b| support[b])
            .collect();
        if let Some(y) = y_space_exact(set, &support, &exposed)? {
            let bits = exposed.iter().fold(0u64, |acc, &i| acc | 1 << i);
            branches.push(Branch { exposed: bits, y });
        }
    }
    let mut best = 0;
    for br in &branches {
        best = best.max(1 + visit(set, mask | br.exposed, ex)?);
    }
    ex.depth.insert(mask, best);
    ex.branches.insert(mask, branches);
    Ok(best)
}
