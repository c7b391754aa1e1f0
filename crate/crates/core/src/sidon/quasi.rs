//! Quasi-independence: no nontrivial `Σ f(γ) γ = 0` with `f: E → {-1, 0, 1}`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Character, CharacterSet};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuasiReport {
    pub independent: bool,
    /// A relation, one coefficient per element of `E` in canonical order, with
    /// its first nonzero coefficient equal to `+1`.
    pub witness: Option<Vec<i8>>,
    /// Signings examined.
    pub signings: u64,
}

fn pow3(k: usize) -> Option<u64> {
    3u64.checked_pow(k as u32)
}

fn normalized(mut f: Vec<i8>) -> Vec<i8> {
    if f.iter().find(|&&c| c != 0).is_some_and(|&c| c < 0) {
        f.iter_mut().for_each(|c| *c = -*c);
    }
    f
}

/// Signings of `chars` in base-3 order (digit 0, 1, 2 meaning 0, +1, -1),
/// each with its sum.
fn signed_sums(set: &CharacterSet, chars: &[Character]) -> Vec<(Vec<i8>, Character)> {
    let g = set.group();
    let total = pow3(chars.len()).expect("checked by caller");
    (0..total)
        .map(|mut i| {
            let f: Vec<i8> = (0..chars.len())
                .map(|_| {
                    let d = (i % 3) as i8;
                    i /= 3;
                    if d == 2 {
                        -1
                    } else {
                        d
                    }
                })
                .collect();
            let coeffs: Vec<i64> = f.iter().map(|&c| c as i64).collect();
            let s = g.linear_combination(chars, &coeffs).expect("characters of the set's group");
            (f, s)
        })
        .collect()
}

/// Direct enumeration of all `3^|E|` signings.
pub fn quasi_independent_direct(set: &CharacterSet, budget: u64) -> Result<QuasiReport> {
    let needed = pow3(set.len()).filter(|&t| t <= budget).ok_or(Error::ResourceLimit {
        what: "signings",
        needed: 3u128.saturating_pow(set.len() as u32),
        budget,
    })?;
    let witness = signed_sums(set, set.elements())
        .into_iter()
        .find(|(f, s)| s.is_identity() && f.iter().any(|&c| c != 0))
        .map(|(f, _)| normalized(f));
    Ok(QuasiReport { independent: witness.is_none(), witness, signings: needed })
}

/// Meet in the middle: `3^⌈|E|/2⌉ + 3^⌊|E|/2⌋` signings and one hash table.
pub fn quasi_independent(set: &CharacterSet, budget: u64) -> Result<QuasiReport> {
    let g = set.group();
    let h = set.len() / 2;
    let (left, right) = set.elements().split_at(h);
    let needed = pow3(left.len())
        .zip(pow3(right.len()))
        .and_then(|(a, b)| a.checked_add(b))
        .filter(|&t| t <= budget)
        .ok_or(Error::ResourceLimit {
            what: "signings",
            needed: 3u128.saturating_pow(right.len() as u32) * 2,
            budget,
        })?;

    // sum -> a left signing with that sum, nonzero when one exists
    let mut table: HashMap<Character, Vec<i8>> = HashMap::new();
    for (f, s) in signed_sums(set, left) {
        let nonzero = f.iter().any(|&c| c != 0);
        match table.get(&s) {
            Some(old) if old.iter().any(|&c| c != 0) || !nonzero => {}
            _ => {
                table.insert(s, f);
            }
        }
    }
    let mut witness = None;
    for (f, s) in signed_sums(set, right) {
        let right_zero = f.iter().all(|&c| c == 0);
        let target = g.negate(&s)?;
        if let Some(l) = table.get(&target) {
            if !right_zero || l.iter().any(|&c| c != 0) {
                witness = Some(normalized(l.iter().chain(&f).copied().collect()));
                break;
            }
        }
    }
    Ok(QuasiReport { independent: witness.is_none(), witness, signings: needed })
}
