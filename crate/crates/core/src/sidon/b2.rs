//! Pair-sum coincidences `γ₁ + γ₂ = γ₃ + γ₄` with `{γ₃, γ₄} ≠ {γ₁, γ₂}`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Character, CharacterSet};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct B2Report {
    pub count: u64,
    /// Index quadruples `(i, j, k, l)` into `E` with `i ≤ j`, `k ≤ l` and
    /// `(i, j) < (k, l)`, at most `max_listed` of them.
    pub quadruples: Vec<[usize; 4]>,
    pub truncated: bool,
}

/// Counts unordered pairs of unordered pairs (repetition allowed) with equal sums.
pub fn b2_coincidences(set: &CharacterSet, budget: u64, max_listed: usize) -> Result<B2Report> {
    let n = set.len() as u64;
    let pairs = n * (n + 1) / 2;
    if pairs > budget {
        return Err(Error::ResourceLimit { what: "pair sums", needed: pairs as u128, budget });
    }
    let g = set.group();
    let els = set.elements();
    let mut by_sum: BTreeMap<Character, Vec<(usize, usize)>> = BTreeMap::new();
    for i in 0..els.len() {
        for j in i..els.len() {
            by_sum.entry(g.add(&els[i], &els[j])?).or_default().push((i, j));
        }
    }
    let mut count = 0u64;
    let mut quadruples = Vec::new();
    for ps in by_sum.values() {
        let c = ps.len() as u64;
        count += c * (c - 1) / 2;
        for a in 0..ps.len() {
            for b in a + 1..ps.len() {
                if quadruples.len() < max_listed {
                    quadruples.push([ps[a].0, ps[a].1, ps[b].0, ps[b].1]);
                }
            }
        }
    }
    quadruples.sort_unstable();
    Ok(B2Report { truncated: (quadruples.len() as u64) < count, count, quadruples })
}
