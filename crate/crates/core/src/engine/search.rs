//! Exhaustive search over grid targets `φ: E → Z_n` for `α_n(E)`.
//!
//! Depth-first over positions of `E` in canonical order, with three cuts:
//!
//! * orbit pruning: the value is invariant under `φ ↦ ±φ + arg(y)` for dual
//!   points `y` that keep `φ` on the grid, so only lexicographically minimal
//!   orbit members are visited;
//! * an upper bound: for any probe point `x`, the value of every completion is
//!   at most the max over assigned positions of `dist(φ_k, arg γ_k(x))` and over
//!   unassigned ones of the worst grid distance to `arg γ_k(x)`; subtrees whose
//!   bound cannot beat the incumbent by more than `tol` are closed;
//! * leaves stop their inner solve once they fall below the incumbent.
//!
//! The incumbent is seeded by coordinate ascent. The tree is cut at a fixed
//! depth into independent tasks so results do not depend on thread count.

use std::collections::BTreeSet;
use std::f64::consts::{PI, TAU};

use num_integer::Integer;
use rayon::prelude::*;

use super::inner::{minimize, Exhausted, Objective, SelectionIter};
use super::{approx_error, EngineConfig, ErrorBracket, KroneckerResult, TargetMap, WorkStats};
use crate::angle::{angular_distance, Angle, Turns, ANGLE_TOL};
use crate::error::{Error, Result};
use crate::group::{CharacterSet, DualPoint};

const MAX_SYMMETRIES: usize = 16_384;
const MAX_PROBE_DEN: u64 = 1 << 40;
const MAX_TASK_PREFIXES: u64 = 4096;
const TORSION_PROBES: usize = 16;
const DIAGONAL_PROBES: u64 = 32;

struct Sym {
    neg: bool,
    shift: Vec<u64>,
}

/// Probe phases: exact positions over a common denominator, or radians.
enum Probe {
    Exact { pos: Vec<u64>, suffix: Vec<u64> },
    Float { phase: Vec<f64>, suffix: Vec<f64> },
}

#[derive(Clone, Debug)]
struct Leaf {
    steps: Vec<u64>,
    lower: f64,
    upper: f64,
    exact: Option<Turns>,
    upper_exact: Option<Turns>,
    point: DualPoint,
    theta: Option<Turns>,
}

impl Leaf {
    fn beats(&self, other: &Leaf) -> bool {
        self.lower > other.lower || (self.lower == other.lower && self.steps < other.steps)
    }
}

/// Running maximum of the upper bounds of closed subtrees and leaves.
#[derive(Clone, Copy, Debug, Default)]
struct UpperAcc {
    exact: Option<Turns>,
    float: f64,
}

impl UpperAcc {
    fn add_exact(&mut self, t: Turns) {
        self.exact = Some(self.exact.map_or(t, |e| e.max(t)));
    }

    fn add_float(&mut self, v: f64) {
        self.float = self.float.max(v);
    }

    fn merge(&mut self, o: &UpperAcc) {
        if let Some(t) = o.exact {
            self.add_exact(t);
        }
        self.add_float(o.float);
    }

    fn value(&self) -> f64 {
        self.float.max(self.exact.map_or(0.0, Turns::to_radians))
    }
}

struct Ctx<'a> {
    set: &'a CharacterSet,
    n: u64,
    cfg: &'a EngineConfig,
    syms: Vec<Sym>,
    probes: Vec<Probe>,
    probe_den: u64,
}

struct Task {
    steps: Vec<u64>,
    tied: Vec<usize>,
    pm_exact: Vec<u64>,
    pm_float: Vec<f64>,
}

struct TaskState {
    best: Leaf,
    acc: UpperAcc,
    stats: WorkStats,
    budget: u64,
    exhausted: bool,
}

struct TaskResult {
    best: Leaf,
    acc: UpperAcc,
    stats: WorkStats,
    exhausted: bool,
}

pub(super) fn run(set: &CharacterSet, n: u64, cfg: &EngineConfig) -> Result<KroneckerResult> {
    let mut stats = WorkStats::default();
    let warm_budget = (cfg.budget / 8).max(1);
    let warm = warm_start(set, n, cfg, warm_budget, &mut stats)?;
    let syms = symmetries(set, n);
    stats.symmetries = syms.len() as u64;
    let (probes, probe_den) = probes(set, n, &warm);
    let ctx = Ctx { set, n, cfg, syms, probes, probe_den };

    let mut acc = UpperAcc::default();
    record_leaf(&mut acc, &warm);
    let mut best = warm;

    let len = set.len();
    let mut split = len.min(2);
    while split > 0 && (n as u128).pow(split as u32) > MAX_TASK_PREFIXES as u128 {
        split -= 1;
    }
    let mut pre = TaskState {
        best: best.clone(),
        acc,
        stats: WorkStats::default(),
        budget: u64::MAX,
        exhausted: false,
    };
    let mut tasks = Vec::new();
    let root = ctx.root_task();
    ctx.collect_tasks(&mut pre, root, split, &mut tasks);
    stats.absorb(&pre.stats);
    acc = pre.acc;

    let remaining = cfg.budget.saturating_sub(stats.work());
    let mut certified = remaining > 0;
    let run_all = |tasks: &[Task]| -> Vec<TaskResult> {
        let mut out = Vec::with_capacity(tasks.len());
        let mut used = 0u64;
        let chunk = rayon::current_num_threads().max(1) * 4;
        for group in tasks.chunks(chunk) {
            let results: Vec<TaskResult> = group
                .par_iter()
                .map(|t| ctx.run_task(t, best.clone(), remaining))
                .collect();
            for r in results {
                used = used.saturating_add(r.stats.work());
                if r.exhausted || used > remaining {
                    return out;
                }
                out.push(r);
            }
        }
        out
    };
    let results = if certified {
        if cfg.threads > 0 {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(cfg.threads)
                .build()
                .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
            pool.install(|| run_all(&tasks))
        } else {
            run_all(&tasks)
        }
    } else {
        Vec::new()
    };
    if results.len() < tasks.len() {
        certified = false;
    }
    for r in results {
        stats.absorb(&r.stats);
        acc.merge(&r.acc);
        if r.best.beats(&best) {
            best = r.best;
        }
    }

    let alpha = if certified {
        let upper = acc.value().max(best.upper).max(best.lower);
        match best.exact {
            Some(t)
                if acc.exact.map_or(true, |e| e <= t)
                    && acc.float <= t.to_radians()
                    && best.upper <= t.to_radians() =>
            {
                ErrorBracket::exact(t)
            }
            _ => ErrorBracket::new(best.lower, upper),
        }
    } else {
        let cap = if n % 2 == 0 { PI } else { Turns::new(n as i128 - 1, 2 * n as i128).to_radians() };
        ErrorBracket::new(best.lower, cap.max(best.lower))
    };
    let worst_target = TargetMap::roots(n, &best.steps)?;
    let witness_error = approx_error(set, &worst_target, &best.point)?;
    Ok(KroneckerResult {
        kappa: alpha.chordal(),
        alpha,
        roots_order: Some(n),
        worst_target,
        witness_point: best.point,
        witness_error,
        certified,
        stats,
        ladder: Vec::new(),
    })
}

fn record_leaf(acc: &mut UpperAcc, leaf: &Leaf) {
    match leaf.upper_exact {
        Some(t) => acc.add_exact(t),
        None => acc.add_float(leaf.upper),
    }
}

fn solve_leaf(
    set: &CharacterSet,
    n: u64,
    cfg: &EngineConfig,
    steps: &[u64],
    budget: u64,
    stop_below: Option<f64>,
) -> Result<(Leaf, u64), Exhausted> {
    let targets: Vec<Angle> = steps.iter().map(|&j| Angle::Exact(Turns::root(j, n))).collect();
    let obj = Objective::new(set.group(), set.elements(), &targets);
    let out = minimize(&obj, &cfg.inner(budget, stop_below))?;
    let leaf = Leaf {
        steps: steps.to_vec(),
        lower: out.lower,
        upper: out.upper,
        exact: out.exact,
        upper_exact: out.upper_exact,
        point: out.point,
        theta: out.theta,
    };
    Ok((leaf, out.evals))
}

/// Coordinate ascent from `φ = 0` over a strided grid.
fn warm_start(
    set: &CharacterSet,
    n: u64,
    cfg: &EngineConfig,
    budget: u64,
    stats: &mut WorkStats,
) -> Result<Leaf> {
    let len = set.len();
    let mut used = 0u64;
    let (mut best, evals) = solve_leaf(set, n, cfg, &vec![0; len], cfg.budget, None).map_err(|e| {
        Error::ResourceLimit { what: "inner minimization", needed: e.needed, budget: cfg.budget }
    })?;
    used += evals;
    stats.targets_enumerated += 1;
    let stride = (n / 64).max(1);
    'outer: for _ in 0..cfg.ascent_passes {
        let mut improved = false;
        for k in 0..len {
            let mut j = 0;
            while j < n {
                if j != best.steps[k] {
                    let mut steps = best.steps.clone();
                    steps[k] = j;
                    let left = budget.saturating_sub(used);
                    let Ok((leaf, evals)) = solve_leaf(set, n, cfg, &steps, left, None) else {
                        break 'outer;
                    };
                    used += evals;
                    stats.targets_enumerated += 1;
                    if leaf.lower > best.lower {
                        best = leaf;
                        improved = true;
                    }
                    if used >= budget {
                        break 'outer;
                    }
                }
                j += stride;
            }
        }
        if !improved {
            break;
        }
    }
    stats.inner_evaluations += used;
    Ok(best)
}

/// Grid-preserving symmetries `φ ↦ ±φ + s`, identity excluded.
fn symmetries(set: &CharacterSet, n: u64) -> Vec<Sym> {
    let g = set.group();
    let chars = set.elements();
    let mut axes: Vec<(u64, Vec<u64>)> = Vec::new();
    for j in 0..g.free_rank() {
        let e = chars.iter().map(|c| c.free[j].rem_euclid(n as i64) as u64).collect();
        axes.push((n, e));
    }
    for (i, &m) in g.torsion_orders().iter().enumerate() {
        let d = n.gcd(&m);
        if d > 1 {
            let e = chars.iter().map(|c| (c.torsion[i] * (n / d)) % n).collect();
            axes.push((d, e));
        }
    }
    let mut shifts = BTreeSet::new();
    let radices: Vec<u64> = axes.iter().map(|a| a.0).collect();
    for u in SelectionIter::new(radices).take(4 * MAX_SYMMETRIES) {
        let s: Vec<u64> = (0..chars.len())
            .map(|k| {
                axes.iter()
                    .zip(&u)
                    .fold(0u128, |acc, ((_, e), &x)| (acc + e[k] as u128 * x as u128) % n as u128)
                    as u64
            })
            .collect();
        shifts.insert(s);
        if shifts.len() >= MAX_SYMMETRIES {
            break;
        }
    }
    let mut syms = Vec::new();
    for s in shifts {
        for neg in [false, true] {
            if !neg && s.iter().all(|&x| x == 0) {
                continue;
            }
            syms.push(Sym { neg, shift: s.clone() });
        }
    }
    syms.truncate(MAX_SYMMETRIES);
    syms
}

fn probes(set: &CharacterSet, n: u64, warm: &Leaf) -> (Vec<Probe>, u64) {
    let g = set.group();
    let chars = set.elements();
    let len = chars.len();
    let r = g.free_rank();

    let mut points: Vec<(Vec<Turns>, Vec<u64>)> = Vec::new();
    for sel in SelectionIter::new(g.torsion_orders().to_vec()).take(TORSION_PROBES) {
        points.push((vec![Turns::ZERO; r], sel));
    }
    if r > 0 {
        for i in 1..(2 * n).min(DIAGONAL_PROBES) {
            let t = Turns::root(i, 2 * n);
            points.push((vec![t; r], vec![0; g.torsion_orders().len()]));
        }
    }
    let warm_exact = warm.theta.filter(|_| r == 1);
    if let Some(t) = warm_exact {
        points.push((vec![t], warm.point.selections.clone()));
    }
    let den = points
        .iter()
        .flat_map(|(f, _)| f.iter().map(|t| t.den()))
        .try_fold((2 * n).lcm(&g.torsion_lcm()), |l, d| {
            let m = l.lcm(&d);
            (m <= MAX_PROBE_DEN).then_some(m)
        });

    let worst_float = |p: f64| -> f64 {
        let anti = (p + PI).rem_euclid(TAU);
        let j0 = (anti / TAU * n as f64).floor() as u64;
        [j0, j0 + 1]
            .iter()
            .map(|&j| angular_distance(TAU * (j % n) as f64 / n as f64, p))
            .fold(0.0, f64::max)
    };

    let mut out = Vec::new();
    match den {
        Some(den) => {
            let step = den / n;
            let worst_exact = |p: u64| -> u64 {
                let anti = (p + den / 2) % den;
                let j0 = anti / step;
                [j0, j0 + 1]
                    .iter()
                    .map(|&j| exact_dist((j % n) * step, p, den))
                    .max()
                    .unwrap()
            };
            for (free, sel) in &points {
                let pos: Vec<u64> = chars
                    .iter()
                    .map(|c| {
                        let f = c.free.iter().zip(free).fold(0i128, |a, (&x, t)| {
                            a + x as i128 * (t.num() * (den / t.den())) as i128
                        });
                        let t = g.torsion_phase(c, sel);
                        let t = t.num() as i128 * (den / t.den()) as i128;
                        (f + t).rem_euclid(den as i128) as u64
                    })
                    .collect();
                let mut suffix = vec![0u64; len + 1];
                for k in (0..len).rev() {
                    suffix[k] = suffix[k + 1].max(worst_exact(pos[k]));
                }
                out.push(Probe::Exact { pos, suffix });
            }
        }
        None => {
            for (free, sel) in &points {
                let x = DualPoint {
                    angles: free.iter().map(|t| t.to_radians()).collect(),
                    selections: sel.clone(),
                };
                out.push(float_probe(set, &x, &worst_float));
            }
        }
    }
    if warm_exact.is_none() || den.is_none() {
        out.push(float_probe(set, &warm.point, &worst_float));
    }
    (out, den.unwrap_or(1))
}

fn float_probe(set: &CharacterSet, x: &DualPoint, worst: &dyn Fn(f64) -> f64) -> Probe {
    let phase: Vec<f64> = set
        .elements()
        .iter()
        .map(|c| set.group().phase_unchecked(c, x).radians())
        .collect();
    let mut suffix = vec![0.0f64; phase.len() + 1];
    for k in (0..phase.len()).rev() {
        suffix[k] = suffix[k + 1].max(worst(phase[k]));
    }
    Probe::Float { phase, suffix }
}

fn exact_dist(a: u64, b: u64, den: u64) -> u64 {
    let r = (a + den - b) % den;
    r.min(den - r)
}

impl Ctx<'_> {
    fn root_task(&self) -> Task {
        let (ne, nf) = self.probe_counts();
        Task {
            steps: Vec::new(),
            tied: (0..self.syms.len()).collect(),
            pm_exact: vec![0; ne],
            pm_float: vec![0.0; nf],
        }
    }

    fn probe_counts(&self) -> (usize, usize) {
        let ne = self.probes.iter().filter(|p| matches!(p, Probe::Exact { .. })).count();
        (ne, self.probes.len() - ne)
    }

    fn sym_apply(&self, s: &Sym, depth: usize, j: u64) -> u64 {
        let base = if s.neg { (self.n - j) % self.n } else { j };
        (base + s.shift[depth]) % self.n
    }

    /// Children of `t` that survive both cuts, with their bound bookkeeping.
    fn children(&self, st: &mut TaskState, t: &Task) -> Vec<Task> {
        let depth = t.steps.len();
        let n = self.n;
        let step = self.probe_den / n;
        let threshold = st.best.lower + self.cfg.tol;
        let mut out = Vec::new();
        'values: for j in 0..n {
            let mut tied = Vec::new();
            for &gi in &t.tied {
                let gj = self.sym_apply(&self.syms[gi], depth, j);
                if gj < j {
                    continue 'values;
                }
                if gj == j {
                    tied.push(gi);
                }
            }
            st.stats.nodes += 1;
            let mut pm_exact = t.pm_exact.clone();
            let mut pm_float = t.pm_float.clone();
            let (mut ue, mut uf) = (u64::MAX, f64::INFINITY);
            let (mut ie, mut jf) = (0, 0);
            for p in &self.probes {
                match p {
                    Probe::Exact { pos, suffix } => {
                        let d = exact_dist(j * step, pos[depth], self.probe_den);
                        pm_exact[ie] = pm_exact[ie].max(d);
                        ue = ue.min(pm_exact[ie].max(suffix[depth + 1]));
                        ie += 1;
                    }
                    Probe::Float { phase, suffix } => {
                        let d = angular_distance(TAU * j as f64 / n as f64, phase[depth]);
                        pm_float[jf] = pm_float[jf].max(d);
                        uf = uf.min(pm_float[jf].max(suffix[depth + 1]) + ANGLE_TOL);
                        jf += 1;
                    }
                }
            }
            let ue_turns = (ue != u64::MAX).then(|| Turns::new(ue as i128, self.probe_den as i128));
            let ue_rad = ue_turns.map_or(f64::INFINITY, Turns::to_radians);
            if ue_rad <= threshold {
                st.acc.add_exact(ue_turns.unwrap());
                st.stats.targets_pruned += 1;
                continue;
            }
            if uf <= threshold {
                st.acc.add_float(uf);
                st.stats.targets_pruned += 1;
                continue;
            }
            let mut steps = t.steps.clone();
            steps.push(j);
            out.push(Task { steps, tied, pm_exact, pm_float });
        }
        out
    }

    fn collect_tasks(&self, st: &mut TaskState, t: Task, depth: usize, out: &mut Vec<Task>) {
        if t.steps.len() == depth {
            out.push(t);
            return;
        }
        for c in self.children(st, &t) {
            self.collect_tasks(st, c, depth, out);
        }
    }

    fn run_task(&self, t: &Task, best: Leaf, budget: u64) -> TaskResult {
        let mut st = TaskState {
            best,
            acc: UpperAcc::default(),
            stats: WorkStats::default(),
            budget,
            exhausted: false,
        };
        let t = Task {
            steps: t.steps.clone(),
            tied: t.tied.clone(),
            pm_exact: t.pm_exact.clone(),
            pm_float: t.pm_float.clone(),
        };
        self.dfs(&mut st, t);
        TaskResult { best: st.best, acc: st.acc, stats: st.stats, exhausted: st.exhausted }
    }

    fn dfs(&self, st: &mut TaskState, t: Task) {
        if st.exhausted {
            return;
        }
        if st.stats.work() > st.budget {
            st.exhausted = true;
            return;
        }
        if t.steps.len() == self.set.len() {
            self.leaf(st, &t.steps);
            return;
        }
        for c in self.children(st, &t) {
            self.dfs(st, c);
            if st.exhausted {
                return;
            }
        }
    }

    fn leaf(&self, st: &mut TaskState, steps: &[u64]) {
        let left = st.budget.saturating_sub(st.stats.work());
        let stop = Some(st.best.lower + self.cfg.tol);
        match solve_leaf(self.set, self.n, self.cfg, steps, left, stop) {
            Ok((leaf, evals)) => {
                st.stats.inner_evaluations += evals;
                st.stats.targets_enumerated += 1;
                record_leaf(&mut st.acc, &leaf);
                if leaf.beats(&st.best) {
                    st.best = leaf;
                }
            }
            Err(e) => {
                st.stats.inner_evaluations += e.evals;
                st.exhausted = true;
            }
        }
    }
}
