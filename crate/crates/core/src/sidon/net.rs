//! Greedy maximal separated sets in the metric `sup_{γ∈F} |γ(x) - γ(y)|`.
//!
//! The candidate universe is the full torsion part of the dual times a uniform
//! grid of `grid` points on each torus coordinate. Every candidate phase is
//! then a rational fraction of a turn over one common denominator, so the
//! greedy pass compares integers and only converts the final max to a chord.

use std::f64::consts::PI;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::angle::{angular_distance, chordal_of_angle, ANGLE_TOL};
use crate::error::{Error, Result};
use crate::group::{CharacterSet, DualPoint};

const MAX_DEN: u64 = 1 << 62;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparatedSet {
    pub set: CharacterSet,
    /// Chordal separation threshold.
    pub epsilon: f64,
    /// Grid points per torus coordinate (1 for torsion groups).
    pub grid: u64,
    pub universe_size: u64,
    pub points: Vec<DualPoint>,
}

impl SeparatedSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Smallest pairwise distance, recomputed in floating point (`∞` for a single point).
    pub fn min_pairwise_distance(&self) -> f64 {
        let mut m = f64::INFINITY;
        for (i, x) in self.points.iter().enumerate() {
            for y in &self.points[i + 1..] {
                m = m.min(sup_chordal_distance(&self.set, x, y).expect("points of the set's dual"));
            }
        }
        m
    }

    /// Every pair is at least `epsilon - 1e-12` apart.
    pub fn verify_separation(&self) -> bool {
        self.min_pairwise_distance() >= self.epsilon - ANGLE_TOL
    }

    /// Every universe point is within `< epsilon` of some member.
    pub fn verify_maximality(&self) -> bool {
        let u = Universe::new(&self.set, self.grid);
        (0..self.universe_size).all(|i| {
            let x = u.point(i);
            self.points
                .iter()
                .any(|p| sup_chordal_distance(&self.set, &x, p).expect("same group") < self.epsilon)
        })
    }
}

/// `sup_{γ∈F} |γ(x) - γ(y)|`, exact on torsion parts.
pub fn sup_chordal_distance(set: &CharacterSet, x: &DualPoint, y: &DualPoint) -> Result<f64> {
    let g = set.group();
    let mut worst = 0.0f64;
    for gamma in set.elements() {
        let (p, q) = (g.phase(gamma, x)?, g.phase(gamma, y)?);
        let d = if p.free == 0.0 && q.free == 0.0 {
            p.exact.distance(q.exact).map_or_else(|| angular_distance(p.radians(), q.radians()), |t| t.to_radians())
        } else {
            angular_distance(p.radians(), q.radians())
        };
        worst = worst.max(d);
    }
    chordal_of_angle(worst)
}

struct Universe<'a> {
    set: &'a CharacterSet,
    radices: Vec<u64>,
    grid: u64,
}

impl<'a> Universe<'a> {
    fn new(set: &'a CharacterSet, grid: u64) -> Self {
        let g = set.group();
        let mut radices = vec![grid; g.free_rank()];
        radices.extend_from_slice(g.torsion_orders());
        Universe { set, radices, grid }
    }

    fn size(&self) -> Option<u64> {
        self.radices.iter().try_fold(1u64, |p, &m| p.checked_mul(m))
    }

    fn digits(&self, mut i: u64) -> Vec<u64> {
        let mut d = vec![0; self.radices.len()];
        for (slot, &m) in d.iter_mut().zip(&self.radices).rev() {
            *slot = i % m;
            i /= m;
        }
        d
    }

    fn point(&self, i: u64) -> DualPoint {
        let d = self.digits(i);
        let r = self.set.group().free_rank();
        DualPoint {
            angles: d[..r].iter().map(|&k| 2.0 * PI * k as f64 / self.grid as f64).collect(),
            selections: d[r..].to_vec(),
        }
    }

    /// Phases of every character at point `i`, over the common denominator `den`.
    fn positions(&self, i: u64, den: u64) -> Vec<u64> {
        let d = self.digits(i);
        let g = self.set.group();
        let r = g.free_rank();
        self.set
            .elements()
            .iter()
            .map(|c| {
                let mut acc = 0i128;
                for (j, &k) in d[..r].iter().enumerate() {
                    acc += c.free[j] as i128 * k as i128 * (den / self.grid) as i128;
                }
                for ((&t, &s), &m) in c.torsion.iter().zip(&d[r..]).zip(g.torsion_orders()) {
                    acc += (t * s % m) as i128 * (den / m) as i128;
                }
                acc.rem_euclid(den as i128) as u64
            })
            .collect()
    }
}

/// Greedy pass over the universe in canonical order (torus grid indices, then
/// torsion selections, most significant first).
pub fn maximal_separated_set(set: &CharacterSet, epsilon: f64, grid: u64, budget: u64) -> Result<SeparatedSet> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidInput(format!("epsilon {epsilon} must be positive")));
    }
    let g = set.group();
    let grid = if g.free_rank() == 0 { 1 } else { grid };
    if grid == 0 {
        return Err(Error::InvalidInput("torus grid needs at least one point".into()));
    }
    let u = Universe::new(set, grid);
    let size = u.size().ok_or(Error::ResourceLimit { what: "net universe", needed: u128::MAX, budget })?;
    if size > budget {
        return Err(Error::ResourceLimit { what: "net universe", needed: size as u128, budget });
    }
    let den = grid.lcm(&g.torsion_lcm());
    if den > MAX_DEN {
        return Err(Error::InvalidInput(format!("phase denominator {den} too large")));
    }

    let mut work = 0u64;
    let mut members: Vec<Vec<u64>> = Vec::new();
    let mut points = Vec::new();
    for i in 0..size {
        let pos = u.positions(i, den);
        let admit = members.iter().all(|m| {
            let d = m
                .iter()
                .zip(&pos)
                .map(|(&a, &b)| {
                    let r = (a + den - b) % den;
                    r.min(den - r)
                })
                .max()
                .unwrap_or(0);
            chordal_of_angle(2.0 * PI * d as f64 / den as f64).expect("distance within [0, π]") >= epsilon - ANGLE_TOL
        });
        work += members.len() as u64;
        if work > budget.saturating_mul(set.len() as u64 + 1) {
            return Err(Error::ResourceLimit { what: "net pairwise checks", needed: work as u128, budget });
        }
        if admit {
            members.push(pos);
            points.push(u.point(i));
        }
    }
    Ok(SeparatedSet { set: set.clone(), epsilon, grid, universe_size: size, points })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PisierReport {
    pub epsilon: f64,
    pub cardinality: usize,
    pub size_f: usize,
    /// `log₂|S| / |F|`.
    pub rate: f64,
    /// `min(ε, rate) > 0`.
    pub condition_met: bool,
}

pub fn pisier_report(s: &SeparatedSet) -> PisierReport {
    let size_f = s.set.len();
    let rate = (s.len() as f64).log2() / size_f as f64;
    PisierReport {
        epsilon: s.epsilon,
        cardinality: s.len(),
        size_f,
        rate,
        condition_met: s.epsilon.min(rate) > 0.0,
    }
}

/// Separation used when building a net from a Kronecker bound: `(2 - κ_upper)/2`.
pub fn default_net_epsilon(kappa_upper: f64) -> Option<f64> {
    (kappa_upper < 2.0).then(|| (2.0 - kappa_upper) / 2.0)
}

/// `(η, (π/η)^{|F|})` with `η = 2 arcsin(c/2)`, for a chord `0 < c < 2`.
pub fn volume_bound(c: f64, size_f: usize) -> Result<(f64, f64)> {
    if !(c > 0.0 && c < 2.0) {
        return Err(Error::InvalidInput(format!("chord {c} outside (0, 2)")));
    }
    let eta = 2.0 * (c / 2.0).asin();
    Ok((eta, (PI / eta).powi(size_f as i32)))
}

/// `(n/(n-1))^{|F|}`.
pub fn roots_count_bound(n: u64, size_f: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("n = {n} must be at least 2")));
    }
    Ok((n as f64 / (n - 1) as f64).powi(size_f as i32))
}
