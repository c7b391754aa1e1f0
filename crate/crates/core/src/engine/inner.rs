//! Inner minimax: `min_x max_k dist(φ_k, arg γ_k(x))` over the dual group.
//!
//! Torsion coordinates are exhausted exactly. Over the torus the objective is
//! piecewise linear with slope `±⟨γ_k, ·⟩`, which gives two solvers:
//!
//! * breakpoints: for free rank one and exact targets, every local minimum of
//!   the upper envelope sits at a kink `a_k θ ≡ ψ_k, ψ_k + 1/2` or at a crossing
//!   `(a_k ∓ a_l) θ ≡ ψ_k ∓ ψ_l`, all rational in turns, so the minimum is
//!   computed exactly;
//! * a best-first Lipschitz branch and bound on boxes, where a box of half
//!   widths `h` around `c` satisfies `d_k(θ) ≥ d_k(c) - Σ_j |a_kj| h_j`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::TAU;

use num_integer::Integer;

use crate::angle::{angular_distance, reduce_angle, Angle, Turns};
use crate::group::{Character, DualPoint, GroupSpec};

/// Largest common target denominator for which breakpoints are evaluated exactly.
const MAX_EXACT_DEN: u64 = 1 << 40;
/// Initial grid cells per free dimension never exceed this.
const MAX_INITIAL_CELLS: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum InnerMode {
    /// Exact breakpoints when eligible, Lipschitz grid otherwise.
    #[default]
    Auto,
    /// Always the Lipschitz grid (torsion part stays exact).
    Grid,
}

#[derive(Clone, Debug)]
pub(crate) struct InnerConfig {
    pub tol: f64,
    pub budget: u64,
    /// Stop as soon as a point with error at most this is found.
    pub stop_below: Option<f64>,
    pub mode: InnerMode,
    pub grid_cells: Option<usize>,
    pub exact_candidate_limit: u64,
}

#[derive(Clone, Debug)]
pub(crate) struct InnerOutcome {
    pub point: DualPoint,
    pub lower: f64,
    pub upper: f64,
    pub exact: Option<Turns>,
    /// `upper` as an exact fraction, when known.
    pub upper_exact: Option<Turns>,
    /// The free angle of `point` in turns, when it was found exactly.
    pub theta: Option<Turns>,
    pub evals: u64,
}

#[derive(Clone, Debug)]
pub(crate) struct Exhausted {
    pub evals: u64,
    pub needed: u128,
}

/// Data of the objective once the torsion selection is fixed.
struct Slice {
    selection: Vec<u64>,
    /// Max distance over characters with no free part (exact when possible).
    const_exact: Option<Turns>,
    const_value: f64,
    /// Residual target `φ_k - torsion phase` for characters with a free part.
    residuals: Vec<Angle>,
    residual_radians: Vec<f64>,
}

pub(crate) struct Objective<'a> {
    group: &'a GroupSpec,
    chars: &'a [Character],
    targets: &'a [Angle],
    free_idx: Vec<usize>,
    const_idx: Vec<usize>,
}

impl<'a> Objective<'a> {
    pub fn new(group: &'a GroupSpec, chars: &'a [Character], targets: &'a [Angle]) -> Self {
        debug_assert_eq!(chars.len(), targets.len());
        let (free_idx, const_idx) = (0..chars.len()).partition(|&k| chars[k].has_free_part());
        Objective { group, chars, targets, free_idx, const_idx }
    }

    fn slice(&self, selection: Vec<u64>) -> Slice {
        let mut const_exact = Some(Turns::ZERO);
        let mut const_value = 0.0f64;
        for &k in &self.const_idx {
            let t = self.group.torsion_phase(&self.chars[k], &selection);
            let r = self.targets[k].minus_turns(t);
            match r {
                Angle::Exact(e) => {
                    let d = e.distance(Turns::ZERO).expect("reduced turn");
                    const_value = const_value.max(d.to_radians());
                    const_exact = const_exact.map(|c| c.max(d));
                }
                Angle::Radians(a) => {
                    const_value = const_value.max(angular_distance(a, 0.0));
                    const_exact = None;
                }
            }
        }
        if let Some(c) = const_exact {
            const_value = c.to_radians();
        }
        let residuals: Vec<Angle> = self
            .free_idx
            .iter()
            .map(|&k| {
                let t = self.group.torsion_phase(&self.chars[k], &selection);
                self.targets[k].minus_turns(t)
            })
            .collect();
        let residual_radians = residuals.iter().map(|a| a.radians()).collect();
        Slice { selection, const_exact, const_value, residuals, residual_radians }
    }

    fn coeff(&self, i: usize) -> &[i64] {
        &self.chars[self.free_idx[i]].free
    }

    /// Objective value and box lower bound at `center` with half widths `half`.
    fn eval_box(&self, slice: &Slice, center: &[f64], half: &[f64]) -> (f64, f64) {
        let mut value = slice.const_value;
        let mut lower = slice.const_value;
        for (i, &psi) in slice.residual_radians.iter().enumerate() {
            let a = self.coeff(i);
            let mut dot = 0.0;
            let mut radius = 0.0;
            for j in 0..a.len() {
                dot += a[j] as f64 * center[j];
                radius += a[j].unsigned_abs() as f64 * half[j];
            }
            let d = angular_distance(psi, dot);
            value = value.max(d);
            lower = lower.max(d - radius);
        }
        (value, lower.max(0.0))
    }

    fn selections(&self) -> SelectionIter {
        SelectionIter::new(self.group.torsion_orders().to_vec())
    }

    fn exact_eligible(&self) -> bool {
        self.group.free_rank() == 1 && self.targets.iter().all(|t| t.exact().is_some())
    }

    /// Number of breakpoint candidates per torsion selection.
    fn candidate_count(&self) -> u64 {
        let a: Vec<i64> = (0..self.free_idx.len()).map(|i| self.coeff(i)[0]).collect();
        let mut count: u64 = a.iter().map(|x| 2 * x.unsigned_abs()).sum();
        for k in 0..a.len() {
            for l in k + 1..a.len() {
                count += (a[k] - a[l]).unsigned_abs() + (a[k] + a[l]).unsigned_abs();
            }
        }
        count
    }
}

pub(crate) struct SelectionIter {
    orders: Vec<u64>,
    next: Option<Vec<u64>>,
}

impl SelectionIter {
    pub fn new(orders: Vec<u64>) -> Self {
        let next = Some(vec![0; orders.len()]);
        SelectionIter { orders, next }
    }
}

impl Iterator for SelectionIter {
    type Item = Vec<u64>;
    fn next(&mut self) -> Option<Vec<u64>> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        let mut i = succ.len();
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            succ[i] += 1;
            if succ[i] < self.orders[i] {
                self.next = Some(succ);
                break;
            }
            succ[i] = 0;
        }
        Some(cur)
    }
}

pub(crate) fn minimize(obj: &Objective<'_>, cfg: &InnerConfig) -> Result<InnerOutcome, Exhausted> {
    let torsion = obj.group.torsion_dual_size();
    if torsion > cfg.budget as u128 {
        return Err(Exhausted { evals: 0, needed: torsion });
    }
    if obj.free_idx.is_empty() {
        return Ok(minimize_constant(obj, cfg));
    }
    if cfg.mode == InnerMode::Auto && obj.exact_eligible() {
        let per = obj.candidate_count();
        if per <= cfg.exact_candidate_limit {
            if let Some(out) = minimize_breakpoints(obj, cfg)? {
                return Ok(out);
            }
        }
    }
    minimize_grid(obj, cfg)
}

fn minimize_constant(obj: &Objective<'_>, cfg: &InnerConfig) -> InnerOutcome {
    let r = obj.group.free_rank();
    let mut best: Option<Slice> = None;
    let mut evals = 0;
    for sel in obj.selections() {
        evals += 1;
        let s = obj.slice(sel);
        let better = match &best {
            None => true,
            Some(b) => match (s.const_exact, b.const_exact) {
                (Some(x), Some(y)) => x < y,
                _ => s.const_value < b.const_value,
            },
        };
        if better {
            best = Some(s);
        }
        let b = best.as_ref().unwrap();
        if b.const_value == 0.0 || cfg.stop_below.is_some_and(|t| b.const_value <= t) {
            break;
        }
    }
    let b = best.expect("at least one selection");
    InnerOutcome {
        point: DualPoint { angles: vec![0.0; r], selections: b.selection.clone() },
        lower: b.const_value,
        upper: b.const_value,
        exact: b.const_exact,
        upper_exact: b.const_exact,
        theta: (r == 1).then_some(Turns::ZERO),
        evals,
    }
}

/// Exact minimum over breakpoint candidates. `Ok(None)` when the common
/// denominator is too large for exact arithmetic.
fn minimize_breakpoints(
    obj: &Objective<'_>,
    cfg: &InnerConfig,
) -> Result<Option<InnerOutcome>, Exhausted> {
    let a: Vec<i64> = (0..obj.free_idx.len()).map(|i| obj.coeff(i)[0]).collect();
    let mut evals = 0u64;
    let mut best: Option<(Turns, Turns, Vec<u64>)> = None;
    let mut stopped = false;

    for sel in obj.selections() {
        let slice = obj.slice(sel);
        let psi: Vec<Turns> = slice.residuals.iter().map(|r| r.exact().unwrap()).collect();
        let v = psi.iter().fold(2u64, |l, t| l.lcm(&t.den()));
        let max_d = a
            .iter()
            .flat_map(|x| a.iter().map(move |y| x.unsigned_abs() + y.unsigned_abs()))
            .max()
            .unwrap_or(1);
        if v > MAX_EXACT_DEN || v.saturating_mul(max_d) > MAX_EXACT_DEN {
            return Ok(None);
        }
        let v = v as i128;
        let u: Vec<i128> = psi.iter().map(|t| t.num() as i128 * (v / t.den() as i128)).collect();
        let c_exact = slice.const_exact.expect("exact targets give exact constants");

        // Running best over this slice: distance numerator / denominator and θ = p/(v·q).
        let mut slice_best: Option<(i128, i128, i128, i128)> = None;
        let mut floor_hit = false;
        let mut try_candidate = |num: i128, q: i128, evals: &mut u64| -> bool {
            // θ = num / (v q) turns, q > 0
            *evals += 1;
            let den = v * q;
            let mut dmax = 0i128;
            for (k, &ak) in a.iter().enumerate() {
                let r = (ak as i128 * num - u[k] * q).rem_euclid(den);
                dmax = dmax.max(r.min(den - r));
                if slice_best.is_some_and(|(bd, bden, _, _)| dmax * bden >= bd * den) {
                    return false;
                }
            }
            slice_best = Some((dmax, den, num, q));
            // Stop when the constant part dominates or the threshold is met.
            let (bd, bden, _, _) = slice_best.unwrap();
            let c_num = c_exact.num() as i128;
            let c_den = c_exact.den() as i128;
            if bd * c_den <= c_num * bden {
                return true;
            }
            if let Some(t) = cfg.stop_below {
                let val = TAU * bd as f64 / bden as f64;
                if val.max(c_exact.to_radians()) <= t {
                    return true;
                }
            }
            false
        };

        'cands: {
            for (k, &ak) in a.iter().enumerate() {
                let q = ak.unsigned_abs() as i128;
                let s = ak.signum() as i128;
                for base in [u[k], u[k] + v / 2] {
                    for m in 0..q {
                        if try_candidate(s * (base + m * v), q, &mut evals) {
                            floor_hit = true;
                            break 'cands;
                        }
                    }
                }
            }
            for k in 0..a.len() {
                for l in k + 1..a.len() {
                    for sgn in [1i128, -1] {
                        let d = a[k] as i128 - sgn * a[l] as i128;
                        if d == 0 {
                            continue;
                        }
                        let c = u[k] - sgn * u[l];
                        let (q, s) = (d.abs(), d.signum());
                        for m in 0..q {
                            if try_candidate(s * (c + m * v), q, &mut evals) {
                                floor_hit = true;
                                break 'cands;
                            }
                        }
                    }
                }
                if evals > cfg.budget {
                    return Err(Exhausted { evals, needed: evals as u128 });
                }
            }
        }
        if evals > cfg.budget {
            return Err(Exhausted { evals, needed: evals as u128 });
        }

        let (bd, bden, num, q) = slice_best.expect("a free character yields candidates");
        let value = Turns::new(bd, bden).max(c_exact);
        let theta = Turns::new(num, v * q);
        let better = match &best {
            None => true,
            Some((bv, _, _)) => value < *bv,
        };
        if better {
            best = Some((value, theta, slice.selection.clone()));
        }
        let bv = best.as_ref().unwrap().0;
        if floor_hit && cfg.stop_below.is_some_and(|t| bv.to_radians() <= t) {
            stopped = true;
            break;
        }
        if bv.is_zero() {
            break;
        }
    }

    let (value, theta, selection) = best.expect("at least one selection");
    let r = value.to_radians();
    Ok(Some(InnerOutcome {
        point: DualPoint { angles: vec![theta.to_radians()], selections: selection },
        lower: if stopped { 0.0 } else { r },
        upper: r,
        exact: if stopped { None } else { Some(value) },
        upper_exact: Some(value),
        theta: Some(theta),
        evals,
    }))
}

struct Cell {
    lower: f64,
    seq: u64,
    slice: usize,
    center: Vec<f64>,
    half: Vec<f64>,
}

impl PartialEq for Cell {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Cell {}
impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Cell {
    // BinaryHeap is a max-heap; invert so the smallest lower bound pops first.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .lower
            .total_cmp(&self.lower)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

fn minimize_grid(obj: &Objective<'_>, cfg: &InnerConfig) -> Result<InnerOutcome, Exhausted> {
    let r = obj.group.free_rank();
    let lip: Vec<f64> = (0..r)
        .map(|j| {
            (0..obj.free_idx.len())
                .map(|i| obj.coeff(i)[j].unsigned_abs())
                .max()
                .unwrap_or(0) as f64
        })
        .collect();
    let cells_per_dim: Vec<usize> = lip
        .iter()
        .map(|&l| {
            if l == 0.0 {
                1
            } else {
                cfg.grid_cells
                    .unwrap_or((2.0 * l).ceil() as usize)
                    .clamp(1, MAX_INITIAL_CELLS)
            }
        })
        .collect();
    let per_slice: u128 = cells_per_dim.iter().map(|&c| c as u128).product();
    let slices: Vec<Slice> = obj.selections().map(|s| obj.slice(s)).collect();
    let needed = per_slice * slices.len() as u128;
    if needed > cfg.budget as u128 {
        return Err(Exhausted { evals: 0, needed });
    }

    let mut heap = BinaryHeap::new();
    let mut seq = 0u64;
    let mut evals = 0u64;
    let mut best = (f64::INFINITY, 0usize, vec![0.0; r]);

    let outcome = |best: (f64, usize, Vec<f64>), lower: f64, evals: u64| {
        let (upper, si, center): (f64, usize, Vec<f64>) = best;
        InnerOutcome {
            point: DualPoint {
                angles: center.iter().map(|&t| reduce_angle(t)).collect(),
                selections: slices[si].selection.clone(),
            },
            lower: lower.min(upper),
            upper,
            exact: None,
            upper_exact: None,
            theta: None,
            evals,
        }
    };

    for (si, slice) in slices.iter().enumerate() {
        let half: Vec<f64> = cells_per_dim.iter().map(|&c| TAU / (2.0 * c as f64)).collect();
        for idx in SelectionIter::new(cells_per_dim.iter().map(|&c| c as u64).collect()) {
            let center: Vec<f64> = idx
                .iter()
                .zip(&half)
                .map(|(&i, &h)| (2 * i + 1) as f64 * h)
                .collect();
            let (value, lower) = obj.eval_box(slice, &center, &half);
            evals += 1;
            if value < best.0 {
                best = (value, si, center.clone());
            }
            heap.push(Cell { lower, seq, slice: si, center, half: half.clone() });
            seq += 1;
        }
        if cfg.stop_below.is_some_and(|t| best.0 <= t) {
            let lower = heap.peek().map_or(best.0, |c| c.lower);
            return Ok(outcome(best, lower, evals));
        }
    }

    while let Some(cell) = heap.pop() {
        if best.0 - cell.lower <= cfg.tol {
            return Ok(outcome(best, cell.lower, evals));
        }
        if evals > cfg.budget {
            return Err(Exhausted { evals, needed: evals as u128 + heap.len() as u128 });
        }
        let j = (0..r)
            .max_by(|&x, &y| (lip[x] * cell.half[x]).total_cmp(&(lip[y] * cell.half[y])))
            .expect("free rank > 0");
        let mut half = cell.half.clone();
        half[j] /= 2.0;
        for sign in [-1.0, 1.0] {
            let mut center = cell.center.clone();
            center[j] += sign * half[j];
            let (value, lower) = obj.eval_box(&slices[cell.slice], &center, &half);
            evals += 1;
            if value < best.0 {
                best = (value, cell.slice, center.clone());
            }
            if lower < best.0 {
                heap.push(Cell { lower, seq, slice: cell.slice, center, half: half.clone() });
                seq += 1;
            }
        }
        if cfg.stop_below.is_some_and(|t| best.0 <= t) {
            return Ok(outcome(best, cell.lower, evals));
        }
    }
    let upper = best.0;
    Ok(outcome(best, upper, evals))
}
