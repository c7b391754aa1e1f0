//! Brute-force reference computations that share no code with the engine.
//!
//! Everything here works on plain integers and `f64`: an element of
//! `Z ⊕ Z_{m_1} ⊕ …` is its free coefficient plus torsion residues, and the
//! inner minimum over the circle is taken at every breakpoint of the
//! piecewise-linear objective.

#![allow(dead_code)]

use std::f64::consts::{PI, TAU};

use kron_core::CharacterSet;

pub fn dist(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

fn objective(a: &[i64], phi: &[f64], theta: f64) -> f64 {
    a.iter().zip(phi).map(|(&k, &p)| dist(p, k as f64 * theta)).fold(0.0, f64::max)
}

/// `min_θ max_k dist(φ_k, a_k θ)`, evaluated at every kink and every pairwise
/// crossing of the tents `θ ↦ dist(φ_k, a_k θ)`.
pub fn inner_min(a: &[i64], phi: &[f64]) -> f64 {
    let mut cands = vec![0.0];
    for (&k, &p) in a.iter().zip(phi) {
        if k == 0 {
            continue;
        }
        for base in [p, p + PI] {
            for m in 0..k.abs() {
                cands.push((base + TAU * m as f64) / k as f64);
            }
        }
    }
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            for s in [1i64, -1] {
                for t in [1i64, -1] {
                    let d = s * a[i] - t * a[j];
                    if d == 0 {
                        continue;
                    }
                    let c = s as f64 * phi[i] - t as f64 * phi[j];
                    for m in 0..d.abs() {
                        cands.push((c + TAU * m as f64) / d as f64);
                    }
                }
            }
        }
    }
    cands.iter().map(|&th| objective(a, phi, th)).fold(f64::INFINITY, f64::min)
}

/// Free coefficient and torsion residues of every element, for sets with free rank ≤ 1.
fn coefficients(set: &CharacterSet) -> (Vec<i64>, Vec<Vec<u64>>, Vec<u64>) {
    let g = set.group();
    assert!(g.free_rank() <= 1, "oracle handles free rank at most 1");
    let a = set.elements().iter().map(|c| c.free_coords().first().copied().unwrap_or(0)).collect();
    let t = set.elements().iter().map(|c| c.torsion_coords().to_vec()).collect();
    (a, t, g.torsion_orders().to_vec())
}

fn selections(orders: &[u64]) -> Vec<Vec<u64>> {
    let mut all = vec![vec![]];
    for &m in orders {
        all = all.into_iter().flat_map(|s: Vec<u64>| (0..m).map(move |v| [s.clone(), vec![v]].concat())).collect();
    }
    all
}

/// Best error for target `phi` over the whole dual of a rank ≤ 1 group.
pub fn best_error(set: &CharacterSet, phi: &[f64]) -> f64 {
    let (a, t, orders) = coefficients(set);
    selections(&orders)
        .iter()
        .map(|s| {
            let shifted: Vec<f64> = phi
                .iter()
                .zip(&t)
                .map(|(&p, tk)| {
                    let turn: f64 =
                        tk.iter().zip(s).zip(&orders).map(|((&c, &v), &m)| ((c * v) % m) as f64 / m as f64).sum();
                    p - TAU * turn
                })
                .collect();
            inner_min(&a, &shifted)
        })
        .fold(f64::INFINITY, f64::min)
}

/// `α_n` by enumerating all `n^|E|` targets.
pub fn alpha_n(set: &CharacterSet, n: u64) -> f64 {
    let len = set.len();
    let total = n.pow(len as u32);
    let mut best = 0.0f64;
    for mut i in 0..total {
        let phi: Vec<f64> = (0..len)
            .map(|_| {
                let j = i % n;
                i /= n;
                TAU * j as f64 / n as f64
            })
            .collect();
        best = best.max(best_error(set, &phi));
    }
    best
}

/// Dense-grid bracket for `α(E)`, `E ⊂ Z`, `|E| = 2`.
pub struct DenseBracket {
    /// Best value found (after local refinement).
    pub lower: f64,
    /// Coarse maximum plus half a grid step (the objective is 1-Lipschitz in sup norm).
    pub upper: f64,
}

pub fn alpha_dense_pair(a: [i64; 2], cells: usize) -> DenseBracket {
    let h = TAU / cells as f64;
    let mut top: Vec<(f64, f64, f64)> = Vec::new();
    let mut coarse = 0.0f64;
    for i in 0..cells {
        for j in 0..cells {
            let phi = [i as f64 * h, j as f64 * h];
            let v = inner_min(&a, &phi);
            coarse = coarse.max(v);
            if top.len() < 16 || v > top.last().unwrap().0 {
                top.push((v, phi[0], phi[1]));
                top.sort_by(|x, y| y.0.total_cmp(&x.0));
                top.truncate(16);
            }
        }
    }
    let mut lower = coarse;
    let fine = 40;
    for &(_, p, q) in &top {
        for i in 0..=fine {
            for j in 0..=fine {
                let phi = [p - h + 2.0 * h * i as f64 / fine as f64, q - h + 2.0 * h * j as f64 / fine as f64];
                lower = lower.max(inner_min(&a, &phi));
            }
        }
    }
    DenseBracket { lower, upper: coarse + h / 2.0 }
}

/// Minimal error of the target `π` on `{(j, e_j)}` and `0` on `{(-j, e_j)}`,
/// `j = 1..N`, by a uniform grid over the free coordinate; the torsion
/// coordinates pick the better sign for each `j` independently.
pub fn mixed_grid(n: u64, cells: usize) -> (f64, f64) {
    let per_j = |j: f64, u: f64| {
        [0.0, PI]
            .iter()
            .map(|&s| dist(PI, j * u + s).max(dist(0.0, -j * u + s)))
            .fold(f64::INFINITY, f64::min)
    };
    let mut best = f64::INFINITY;
    for i in 0..cells {
        let u = TAU * i as f64 / cells as f64;
        let e = (1..=n).map(|j| per_j(j as f64, u)).fold(0.0, f64::max);
        best = best.min(e);
    }
    let lipschitz = n as f64;
    (best - lipschitz * TAU / cells as f64 / 2.0, best)
}
