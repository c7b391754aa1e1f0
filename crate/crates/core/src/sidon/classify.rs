//! Sufficient conditions for I₀ and Sidon, decided from certified upper bounds.

use std::f64::consts::{PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::angle::chordal_of_angle;
use crate::engine::{ChordalBracket, KroneckerResult};

/// `|1 - e^{iπ(1 - 1/n)}|`, the `κ_n` level below which `E` is Sidon.
pub fn kappa_n_threshold(n: u64) -> f64 {
    chordal_of_angle(PI * (1.0 - 1.0 / n as f64)).expect("angle within [0, π]")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RungFlag {
    pub n: u64,
    pub kappa_n: ChordalBracket,
    pub threshold: f64,
    pub fires: bool,
    /// The bracket contains the threshold.
    pub straddles: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub kappa: Option<ChordalBracket>,
    /// `κ_upper < √2`.
    pub i0: bool,
    /// `κ_upper < 2`.
    pub sidon_by_kappa: bool,
    /// Some tested `n` has `κ_n` upper below its threshold.
    pub sidon_by_kappa_n: bool,
    pub rungs: Vec<RungFlag>,
    /// No sufficient condition fired.
    pub inconclusive: bool,
    /// The `κ` bracket contains `√2` or `2`.
    pub kappa_straddles: bool,
}

pub fn classify_brackets(kappa: Option<ChordalBracket>, kappa_n: &[(u64, ChordalBracket)]) -> ClassificationReport {
    let i0 = kappa.is_some_and(|k| k.upper < SQRT_2);
    let sidon_by_kappa = kappa.is_some_and(|k| k.upper < 2.0);
    let kappa_straddles = kappa.is_some_and(|k| {
        let contains = |t: f64| k.lower <= t && t <= k.upper;
        contains(SQRT_2) || (k.lower < 2.0 && contains(2.0))
    });
    let rungs: Vec<RungFlag> = kappa_n
        .iter()
        .map(|&(n, b)| {
            let threshold = kappa_n_threshold(n);
            RungFlag {
                n,
                kappa_n: b,
                threshold,
                fires: b.upper < threshold,
                straddles: b.lower < threshold && threshold <= b.upper,
            }
        })
        .collect();
    let sidon_by_kappa_n = rungs.iter().any(|r| r.fires);
    ClassificationReport {
        kappa,
        i0,
        sidon_by_kappa,
        sidon_by_kappa_n,
        inconclusive: !(i0 || sidon_by_kappa || sidon_by_kappa_n),
        kappa_straddles,
        rungs,
    }
}

/// Uses the result with `roots_order == None` (if any) for `κ` and the others for `κ_n`.
pub fn classify(results: &[KroneckerResult]) -> ClassificationReport {
    let kappa = results.iter().find(|r| r.roots_order.is_none()).map(|r| r.kappa);
    let kappa_n: Vec<(u64, ChordalBracket)> =
        results.iter().filter_map(|r| r.roots_order.map(|n| (n, r.kappa))).collect();
    classify_brackets(kappa, &kappa_n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(lower: f64, upper: f64) -> ChordalBracket {
        ChordalBracket { lower, upper }
    }

    #[test]
    fn thresholds() {
        assert!((kappa_n_threshold(2) - SQRT_2).abs() < 1e-15);
        assert!((kappa_n_threshold(3) - 3f64.sqrt()).abs() < 1e-15);
        for n in 2..=6 {
            let t = 2.0 * (PI * (1.0 - 1.0 / n as f64) / 2.0).sin();
            assert!((kappa_n_threshold(n) - t).abs() < 1e-12);
        }
    }

    #[test]
    fn flags() {
        let r = classify_brackets(Some(b(1.1, 1.2)), &[]);
        assert!(r.i0 && r.sidon_by_kappa && !r.inconclusive);

        let r = classify_brackets(Some(b(1.99, 2.0)), &[]);
        assert!(!r.i0 && !r.sidon_by_kappa && r.inconclusive && r.kappa_straddles);

        let r = classify_brackets(None, &[(3, b(1.0, 1.7))]);
        assert!(r.sidon_by_kappa_n && !r.inconclusive);
        let r = classify_brackets(None, &[(3, b(1.0, 1.75))]);
        assert!(!r.sidon_by_kappa_n && r.rungs[0].straddles);
    }
}
