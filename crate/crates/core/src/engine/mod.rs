//! Certified brackets for the angular Kronecker constants `α_n(E)` and `α(E)`.
//!
//! `α_n` is a sup over finitely many targets `φ: E → Z_n` of an inner minimax
//! over the dual group; both levels are searched exhaustively with branch and
//! bound, so the returned bracket is a proof, not an estimate. `α` over
//! continuous targets is bracketed by the ladder `α_n ≤ α ≤ α_n + π/n`.

mod inner;
mod search;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::angle::{chordal_of_angle, Angle, Turns, ANGLE_TOL};
use crate::error::{Error, Result};
use crate::group::{CharacterSet, DualPoint};

pub use inner::InnerMode;
use inner::{minimize, InnerConfig, Objective};

/// A target function `φ: E → 𝕋`, one angle per element of `E` in canonical order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TargetMap {
    values: Vec<Angle>,
    #[serde(skip_serializing_if = "Option::is_none")]
    roots_order: Option<u64>,
}

impl TargetMap {
    /// `φ(γ_k) = 2π steps[k] / n`.
    pub fn roots(n: u64, steps: &[u64]) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput(format!("roots order {n} < 2")));
        }
        Ok(TargetMap {
            values: steps.iter().map(|&j| Angle::Exact(Turns::root(j % n, n))).collect(),
            roots_order: Some(n),
        })
    }

    pub fn angles(values: &[f64]) -> Self {
        TargetMap {
            values: values.iter().map(|&a| Angle::Radians(a)).collect(),
            roots_order: None,
        }
    }

    /// Exact or floating angles, no grid restriction.
    pub fn from_values(values: Vec<Angle>) -> Self {
        TargetMap { values, roots_order: None }
    }

    pub fn values(&self) -> &[Angle] {
        &self.values
    }

    pub fn roots_order(&self) -> Option<u64> {
        self.roots_order
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Grid steps `j_k` when this is a `Z_n` target.
    pub fn steps(&self) -> Option<Vec<u64>> {
        let n = self.roots_order?;
        self.values
            .iter()
            .map(|v| {
                let t = v.exact()?;
                Some(t.num() * (n / t.den()))
            })
            .collect()
    }

    /// `γ ↦ φ(γ) + arg γ(y)`.
    pub fn shifted(&self, set: &CharacterSet, y: &DualPoint) -> Result<Self> {
        self.check(set)?;
        let values = self
            .values
            .iter()
            .zip(set.elements())
            .map(|(v, g)| Ok(v.plus_phase(set.group().phase(g, y)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(TargetMap { values, roots_order: None })
    }

    /// `γ ↦ -φ(γ)`.
    pub fn negated(&self) -> Self {
        TargetMap {
            values: self.values.iter().map(|v| v.neg()).collect(),
            roots_order: self.roots_order,
        }
    }

    fn check(&self, set: &CharacterSet) -> Result<()> {
        if self.values.len() != set.len() {
            return Err(Error::DimensionMismatch(format!(
                "target has {} values, set has {} characters",
                self.values.len(),
                set.len()
            )));
        }
        Ok(())
    }
}

/// Certified `[lower, upper] ⊆ [0, π]` for an angular quantity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorBracket {
    pub lower: f64,
    pub upper: f64,
    /// Exact value as a fraction of a turn, when the bracket is degenerate and
    /// was obtained by exact arithmetic.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<Turns>,
}

impl ErrorBracket {
    pub fn new(lower: f64, upper: f64) -> Self {
        ErrorBracket { lower: lower.clamp(0.0, PI), upper: upper.clamp(0.0, PI), exact: None }
    }

    pub fn exact(value: Turns) -> Self {
        let v = value.to_radians();
        ErrorBracket { lower: v, upper: v, exact: Some(value) }
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, v: f64, slack: f64) -> bool {
        self.lower - slack <= v && v <= self.upper + slack
    }

    pub fn chordal(&self) -> ChordalBracket {
        ChordalBracket {
            lower: chordal_of_angle(self.lower).expect("bracket within [0, π]"),
            upper: chordal_of_angle(self.upper).expect("bracket within [0, π]"),
        }
    }
}

/// Chordal image `2 sin(·/2)` of an [`ErrorBracket`], in `[0, 2]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChordalBracket {
    pub lower: f64,
    pub upper: f64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WorkStats {
    /// Full targets whose inner problem was solved (possibly cut short).
    pub targets_enumerated: u64,
    /// Subtrees of the target enumeration discarded by the upper bound.
    pub targets_pruned: u64,
    /// Search-tree nodes visited.
    pub nodes: u64,
    pub inner_evaluations: u64,
    /// Number of target symmetries used for orbit pruning.
    pub symmetries: u64,
}

impl WorkStats {
    fn absorb(&mut self, o: &WorkStats) {
        self.targets_enumerated += o.targets_enumerated;
        self.targets_pruned += o.targets_pruned;
        self.nodes += o.nodes;
        self.inner_evaluations += o.inner_evaluations;
        self.symmetries = self.symmetries.max(o.symmetries);
    }

    pub fn work(&self) -> u64 {
        self.nodes + self.inner_evaluations
    }
}

/// One rung `n` of the `α` ladder.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LadderRung {
    pub n: u64,
    pub alpha_n: ErrorBracket,
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KroneckerResult {
    pub alpha: ErrorBracket,
    pub kappa: ChordalBracket,
    /// `Some(n)` for `α_n`, `None` for `α`.
    pub roots_order: Option<u64>,
    pub worst_target: TargetMap,
    pub witness_point: DualPoint,
    /// `approx_error(E, worst_target, witness_point)`.
    pub witness_error: f64,
    /// False when the work budget ran out; `alpha.upper` is then only the
    /// trivial cap and `alpha.lower` whatever was proved before stopping.
    pub certified: bool,
    pub stats: WorkStats,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ladder: Vec<LadderRung>,
}

#[derive(Clone, Debug)]
pub struct EngineConfig {
    /// Requested bracket width, radians.
    pub tol: f64,
    /// Work limit: inner objective evaluations plus search nodes.
    pub budget: u64,
    pub inner: InnerMode,
    /// Initial grid cells per free dimension (default `2·max|γ_j|`).
    pub grid_cells: Option<usize>,
    /// Worker threads for the target enumeration; 0 uses the rayon default.
    pub threads: usize,
    /// Largest `n` tried by the `α` ladder.
    pub max_n: u64,
    /// Coordinate-ascent passes used to seed the target search.
    pub ascent_passes: usize,
    pub exact_candidate_limit: u64,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            tol: 1e-3,
            budget: 100_000_000,
            inner: InnerMode::Auto,
            grid_cells: None,
            threads: 0,
            max_n: 1 << 16,
            ascent_passes: 2,
            exact_candidate_limit: 1 << 22,
        }
    }
}

impl EngineConfig {
    pub fn with_tol(tol: f64) -> Self {
        EngineConfig { tol, ..Default::default() }
    }

    fn inner(&self, budget: u64, stop_below: Option<f64>) -> InnerConfig {
        InnerConfig {
            tol: self.tol,
            budget,
            stop_below,
            mode: self.inner,
            grid_cells: self.grid_cells,
            exact_candidate_limit: self.exact_candidate_limit,
        }
    }
}

/// `max_{γ∈E} dist(φ(γ), arg γ(x))`, exact whenever `φ` and `x` are.
pub fn approx_error(set: &CharacterSet, phi: &TargetMap, x: &DualPoint) -> Result<f64> {
    phi.check(set)?;
    set.group().check_point(x)?;
    let mut worst = 0.0f64;
    let mut exact = Some(Turns::ZERO);
    for (g, &t) in set.elements().iter().zip(phi.values()) {
        let p = set.group().phase(g, x)?;
        match p.exact_distance_to(t) {
            Some(d) => {
                exact = exact.map(|e| e.max(d));
                worst = worst.max(d.to_radians());
            }
            None => {
                exact = None;
                worst = worst.max(p.distance_to(t));
            }
        }
    }
    Ok(exact.map_or(worst, Turns::to_radians))
}

/// Inner minimum of the approximation error for one target, with its bracket.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Approximation {
    pub point: DualPoint,
    pub bracket: ErrorBracket,
    pub evaluations: u64,
}

/// Certified `inf_x approx_error(E, φ, x)` to within `cfg.tol`.
pub fn best_point(set: &CharacterSet, phi: &TargetMap, cfg: &EngineConfig) -> Result<Approximation> {
    phi.check(set)?;
    if !(cfg.tol > 0.0) {
        return Err(Error::InvalidInput(format!("tolerance {} must be positive", cfg.tol)));
    }
    let obj = Objective::new(set.group(), set.elements(), phi.values());
    let out = minimize(&obj, &cfg.inner(cfg.budget, None)).map_err(|e| Error::ResourceLimit {
        what: "inner minimization",
        needed: e.needed.max(e.evals as u128),
        budget: cfg.budget,
    })?;
    let bracket = match out.exact {
        Some(t) => ErrorBracket::exact(t),
        None => ErrorBracket::new(out.lower, out.upper),
    };
    Ok(Approximation { point: out.point, bracket, evaluations: out.evals })
}

/// Certified bracket for `α_n(E)`.
pub fn alpha_n(set: &CharacterSet, n: u64, cfg: &EngineConfig) -> Result<KroneckerResult> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("n = {n} must be at least 2")));
    }
    if !(cfg.tol > 0.0) {
        return Err(Error::InvalidInput(format!("tolerance {} must be positive", cfg.tol)));
    }
    let torsion = set.group().torsion_dual_size();
    if torsion > cfg.budget as u128 {
        return Err(Error::ResourceLimit { what: "torsion dual", needed: torsion, budget: cfg.budget });
    }
    search::run(set, n, cfg)
}

/// Certified bracket for `α(E)` via the ladder `n = 2, 4, 8, …`.
pub fn alpha(set: &CharacterSet, cfg: &EngineConfig) -> Result<KroneckerResult> {
    if !(cfg.tol > 0.0) {
        return Err(Error::InvalidInput(format!("tolerance {} must be positive", cfg.tol)));
    }
    let mut lower = 0.0f64;
    let mut upper = PI;
    let mut exact_lower: Option<Turns> = None;
    let mut best: Option<KroneckerResult> = None;
    let mut ladder = Vec::new();
    let mut stats = WorkStats::default();
    let mut n = 2u64;
    loop {
        let used = stats.work();
        if used >= cfg.budget || n > cfg.max_n {
            break;
        }
        let step = PI / n as f64;
        let rung_tol = if step < cfg.tol { cfg.tol - step } else { cfg.tol };
        let rung_cfg = EngineConfig { tol: rung_tol, budget: cfg.budget - used, ..cfg.clone() };
        let r = alpha_n(set, n, &rung_cfg)?;
        stats.absorb(&r.stats);
        ladder.push(LadderRung { n, alpha_n: r.alpha, certified: r.certified });
        if r.alpha.lower > lower {
            lower = r.alpha.lower;
            exact_lower = r.alpha.exact;
        }
        upper = upper.min(r.alpha.upper + step);
        if best.as_ref().map_or(true, |b| r.alpha.lower > b.alpha.lower) {
            best = Some(r.clone());
        }
        if !r.certified || upper - lower <= cfg.tol {
            break;
        }
        n *= 2;
    }
    let best = best.ok_or(Error::ResourceLimit {
        what: "alpha ladder",
        needed: 1,
        budget: cfg.budget,
    })?;
    let upper = upper.max(lower);
    let alpha = match exact_lower {
        Some(t) if upper - lower <= ANGLE_TOL => ErrorBracket::exact(t),
        _ => ErrorBracket::new(lower, upper),
    };
    Ok(KroneckerResult {
        kappa: alpha.chordal(),
        alpha,
        roots_order: None,
        worst_target: best.worst_target,
        witness_point: best.witness_point,
        witness_error: best.witness_error,
        certified: upper - lower <= cfg.tol,
        stats,
        ladder,
    })
}

/// `κ = |1 - e^{iα}|` applied to both ends of the bracket.
pub fn kappa_variants(result: &KroneckerResult) -> ChordalBracket {
    result.alpha.chordal()
}
