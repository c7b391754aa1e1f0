//! Concrete example sets and the checks run against each of them.
//!
//! Infinite sets are represented by finite truncations, so every lower bound
//! reported here bounds the constant of the infinite set from below only.

use std::collections::BinaryHeap;
use std::cmp::Ordering;
use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::angle::{angular_distance, chordal_of_angle, Turns, ANGLE_TOL};
use crate::engine::{alpha, alpha_n, best_point, EngineConfig, ErrorBracket, KroneckerResult, TargetMap};
use crate::error::{Error, Result};
use crate::group::{CharacterSet, GroupSpec};
use crate::sidon::quasi_independent;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExampleSpec {
    /// `{e₂, e₃, e₁+e₂, e₁+e₃}` in `Z_2^3`.
    Z2Cube,
    /// `{1 + nk : |k| ≤ K}` in `Z`.
    CosetTruncation { n: u64, k: u64 },
    /// `{(j, e_j)} ∪ {(-j, e_j)}` for `j = 1..N` in `Z ⊕ Z_2^N`.
    Mixed { n: u64 },
    /// `n_0 = start`, `n_{j+1} = ⌈q n_j⌉`.
    Hadamard { q: f64, length: usize, start: u64 },
}

impl ExampleSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidInput(m));
        match *self {
            ExampleSpec::Z2Cube => Ok(()),
            ExampleSpec::CosetTruncation { n, .. } if n < 2 => bad(format!("coset modulus {n} < 2")),
            ExampleSpec::Mixed { n: 0 } => bad("mixed example needs N ≥ 1".into()),
            ExampleSpec::Mixed { n } if n > 62 => bad(format!("mixed example N = {n} too large")),
            ExampleSpec::Hadamard { q, .. } if !(q > 1.0) => bad(format!("Hadamard ratio {q} must exceed 1")),
            ExampleSpec::Hadamard { length: 0, .. } => bad("Hadamard length must be ≥ 1".into()),
            ExampleSpec::Hadamard { start: 0, .. } => bad("Hadamard start must be ≥ 1".into()),
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ExampleSpec::Z2Cube => "z2cube",
            ExampleSpec::CosetTruncation { .. } => "coset",
            ExampleSpec::Mixed { .. } => "mixed",
            ExampleSpec::Hadamard { .. } => "hadamard",
        }
    }
}

fn coset(n: u64, k: u64) -> Result<CharacterSet> {
    let (n, k) = (n as i64, k as i64);
    CharacterSet::integers(&(-k..=k).map(|j| 1 + n * j).collect::<Vec<_>>())
}

/// The sequence `⌈q n_j⌉`, which keeps every consecutive ratio at least `q`.
pub fn hadamard_sequence(q: f64, length: usize, start: u64) -> Result<Vec<i64>> {
    let mut out = vec![start as i64];
    while out.len() < length {
        let next = (q * *out.last().unwrap() as f64).ceil();
        if !(next < (1i64 << 52) as f64) {
            return Err(Error::InvalidInput("Hadamard terms exceed exact integer range".into()));
        }
        out.push(next as i64);
    }
    Ok(out)
}

/// The two halves of the mixed example, `E₁ = {(j, e_j)}` and `E₂ = {(-j, e_j)}`.
pub fn mixed_halves(n: u64) -> Result<(CharacterSet, CharacterSet)> {
    ExampleSpec::Mixed { n }.validate()?;
    let g = GroupSpec::new(1, vec![2; n as usize])?;
    let half = |sign: i64| -> Result<CharacterSet> {
        let els = (1..=n as i64)
            .map(|j| {
                let mut t = vec![0; n as usize];
                t[j as usize - 1] = 1;
                g.character(vec![sign * j], t)
            })
            .collect::<Result<Vec<_>>>()?;
        CharacterSet::new(g.clone(), els)
    };
    Ok((half(1)?, half(-1)?))
}

pub fn make_example(spec: &ExampleSpec) -> Result<CharacterSet> {
    spec.validate()?;
    match *spec {
        ExampleSpec::Z2Cube => {
            let g = GroupSpec::torsion(2, 3)?;
            let els = [[0, 1, 0], [0, 0, 1], [1, 1, 0], [1, 0, 1]]
                .iter()
                .map(|v| g.character(vec![], v.to_vec()))
                .collect::<Result<Vec<_>>>()?;
            CharacterSet::new(g, els)
        }
        ExampleSpec::CosetTruncation { n, k } => coset(n, k),
        ExampleSpec::Mixed { n } => {
            let (a, b) = mixed_halves(n)?;
            let mut els = a.elements().to_vec();
            els.extend_from_slice(b.elements());
            CharacterSet::new(a.group().clone(), els)
        }
        ExampleSpec::Hadamard { q, length, start } => CharacterSet::integers(&hadamard_sequence(q, length, start)?),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// The relation being tested, e.g. `"<= pi - pi/3 + tol"`.
    pub expected: String,
    pub computed: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<Turns>,
    pub pass: bool,
}

impl Check {
    fn new(name: impl Into<String>, expected: impl Into<String>, computed: f64, pass: bool) -> Self {
        Check { name: name.into(), expected: expected.into(), computed, exact: None, pass }
    }

    fn exact(mut self, t: Option<Turns>) -> Self {
        self.exact = t;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabeledResult {
    pub label: String,
    pub result: KroneckerResult,
}

/// A bracket computed for one parameter value of a family (truncation size, N).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesPoint {
    pub param: u64,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Violated,
    Undetermined,
}

/// A candidate bound `α ≤ bound` tested against a certified bracket.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Reading {
    pub formula: String,
    pub alpha_bound: f64,
    pub kappa_bound: f64,
    pub verdict: Verdict,
}

impl Reading {
    fn judge(formula: &str, alpha_bound: f64, b: &ErrorBracket) -> Self {
        let verdict = if b.upper <= alpha_bound {
            Verdict::Holds
        } else if b.lower > alpha_bound {
            Verdict::Violated
        } else {
            Verdict::Undetermined
        };
        Reading {
            formula: formula.into(),
            alpha_bound,
            kappa_bound: chordal_of_angle(alpha_bound).expect("bound within [0, π]"),
            verdict,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub example: ExampleSpec,
    pub set: CharacterSet,
    pub checks: Vec<Check>,
    pub brackets: Vec<LabeledResult>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub series: Vec<SeriesPoint>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub readings: Vec<Reading>,
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn certified(&self) -> bool {
        self.brackets.iter().all(|b| b.result.certified)
    }
}

#[derive(Clone, Debug)]
pub struct GalleryConfig {
    pub engine: EngineConfig,
    /// Width requested from the `α` ladder (Hadamard sets).
    pub ladder_tol: f64,
    /// Bracket width for the mixed-example minimization.
    pub mixed_tol: f64,
    /// Largest `N` for which the mixed example is cross-checked by the full engine.
    pub mixed_engine_max: u64,
    pub even_ns: Vec<u64>,
    pub odd_ns: Vec<u64>,
}

impl Default for GalleryConfig {
    fn default() -> Self {
        GalleryConfig {
            engine: EngineConfig::default(),
            ladder_tol: 0.25,
            mixed_tol: 1e-9,
            mixed_engine_max: 6,
            even_ns: vec![2, 4, 6],
            odd_ns: vec![3, 5, 7],
        }
    }
}

fn odd_cap(n: u64) -> f64 {
    PI - PI / n as f64
}

/// Asserts the certified `α_n(E) ≤ π - π/n + tol` for odd `n`.
pub fn odd_bound_check(set: &CharacterSet, n: u64, cfg: &EngineConfig) -> Result<(Check, KroneckerResult)> {
    if n % 2 == 0 {
        return Err(Error::InvalidInput(format!("odd bound needs odd n, got {n}")));
    }
    let r = alpha_n(set, n, cfg)?;
    let pass = r.certified && r.alpha.upper <= odd_cap(n) + cfg.tol;
    let check = Check::new(format!("alpha_{n} odd bound"), format!("<= pi - pi/{n} + tol"), r.alpha.upper, pass)
        .exact(r.alpha.exact);
    Ok((check, r))
}

/// `max_{γ∈E} max_j dist(2πj/n, arg γ(g))` at `g = e^{iπ/n}`, exact.
pub fn even_witness_error(set: &CharacterSet, n: u64) -> Result<Turns> {
    if set.group().free_rank() != 1 || !set.group().torsion_orders().is_empty() {
        return Err(Error::InvalidInput("witness check needs a subset of Z".into()));
    }
    let mut worst = Turns::ZERO;
    for c in set.elements() {
        let phase = Turns::new(c.free_coords()[0] as i128, 2 * n as i128);
        for j in 0..n {
            worst = worst.max(Turns::root(j, n).distance(phase).expect("small denominators"));
        }
    }
    Ok(worst)
}

/// `min_θ max_j min_{g∈{0,π}} max(dist(π, jθ+g), dist(0, -jθ+g))`: the best
/// error for the target `π` on `E₁`, `0` on `E₂`, after choosing each torsion
/// coordinate separately. Certified by a Lipschitz branch and bound on `θ`.
pub fn mixed_sign_error(n: u64, tol: f64) -> Result<ErrorBracket> {
    ExampleSpec::Mixed { n }.validate()?;
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("tolerance {tol} must be positive")));
    }
    let f = |theta: f64| -> f64 {
        (1..=n)
            .map(|j| {
                let a = j as f64 * theta;
                [0.0, PI]
                    .iter()
                    .map(|&g| angular_distance(PI, a + g).max(angular_distance(0.0, -a + g)))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    };
    struct Cell(f64, f64, f64);
    impl PartialEq for Cell {
        fn eq(&self, o: &Self) -> bool {
            self.cmp(o) == Ordering::Equal
        }
    }
    impl Eq for Cell {}
    impl PartialOrd for Cell {
        fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
            Some(self.cmp(o))
        }
    }
    impl Ord for Cell {
        fn cmp(&self, o: &Self) -> Ordering {
            o.0.total_cmp(&self.0).then(o.1.total_cmp(&self.1))
        }
    }
    let lip = n as f64;
    let cells = 10_000usize;
    let h0 = TAU / (2.0 * cells as f64);
    let mut best = f64::INFINITY;
    let mut heap = BinaryHeap::new();
    for i in 0..cells {
        let c = (2 * i + 1) as f64 * h0;
        let v = f(c);
        best = best.min(v);
        heap.push(Cell(v - lip * h0, c, h0));
    }
    while let Some(Cell(lower, c, h)) = heap.pop() {
        if best - lower <= tol {
            return Ok(ErrorBracket::new(lower.max(0.0), best));
        }
        let h = h / 2.0;
        for c in [c - h, c + h] {
            let v = f(c);
            best = best.min(v);
            if v - lip * h < best {
                heap.push(Cell(v - lip * h, c, h));
            }
        }
    }
    Ok(ErrorBracket::new(best, best))
}

pub fn verify_example(spec: &ExampleSpec, cfg: &GalleryConfig) -> Result<VerificationReport> {
    let set = make_example(spec)?;
    let mut report = VerificationReport {
        example: spec.clone(),
        set: set.clone(),
        checks: Vec::new(),
        brackets: Vec::new(),
        series: Vec::new(),
        readings: Vec::new(),
        notes: Vec::new(),
    };
    match *spec {
        ExampleSpec::Z2Cube => verify_cube(&set, cfg, &mut report)?,
        ExampleSpec::CosetTruncation { n, k } => verify_coset(n, k, cfg, &mut report)?,
        ExampleSpec::Mixed { n } => verify_mixed(n, cfg, &mut report)?,
        ExampleSpec::Hadamard { q, .. } => verify_hadamard(&set, q, cfg, &mut report)?,
    }
    Ok(report)
}

fn verify_cube(set: &CharacterSet, cfg: &GalleryConfig, report: &mut VerificationReport) -> Result<()> {
    let g = set.group();
    let special = set.index_of(&g.character(vec![], vec![1, 0, 1])?).expect("e1+e3 is in the set");
    let target = |n: u64, step: u64| {
        let mut steps = vec![0; set.len()];
        steps[special] = step;
        TargetMap::roots(n, &steps)
    };

    let a = best_point(set, &target(2, 1)?, &cfg.engine)?;
    report.checks.push(
        Check::new("best error for the sign target", "== pi exactly", a.bracket.upper, a.bracket.exact == Some(Turns::HALF))
            .exact(a.bracket.exact),
    );
    let kappa = chordal_of_angle(a.bracket.upper)?;
    report.checks.push(Check::new("kappa from the sign target", "== 2", kappa, kappa == 2.0));

    let r = alpha(set, &cfg.engine)?;
    report.checks.push(
        Check::new("alpha", "== pi exactly", r.alpha.lower, r.alpha.exact == Some(Turns::HALF)).exact(r.alpha.exact),
    );
    report.brackets.push(LabeledResult { label: "alpha".into(), result: r });

    for &n in &cfg.even_ns {
        let r = alpha_n(set, n, &cfg.engine)?;
        report.checks.push(
            Check::new(format!("alpha_{n}"), "== pi exactly (even n)", r.alpha.lower, r.alpha.exact == Some(Turns::HALF))
                .exact(r.alpha.exact),
        );
        report.brackets.push(LabeledResult { label: format!("alpha_{n}"), result: r });
    }
    for &n in &cfg.odd_ns {
        let want = Turns::new(n as i128 - 1, 2 * n as i128);
        let a = best_point(set, &target(n, (n - 1) / 2)?, &cfg.engine)?;
        report.checks.push(
            Check::new(
                format!("best error for the omega_{n} target"),
                format!(">= pi - pi/{n}"),
                a.bracket.lower,
                a.bracket.exact.is_some_and(|t| t >= want),
            )
            .exact(a.bracket.exact),
        );
        let (check, r) = odd_bound_check(set, n, &cfg.engine)?;
        report.checks.push(check);
        report.checks.push(
            Check::new(format!("alpha_{n}"), format!("== pi - pi/{n} exactly"), r.alpha.lower, r.alpha.exact == Some(want))
                .exact(r.alpha.exact),
        );
        report.brackets.push(LabeledResult { label: format!("alpha_{n}"), result: r });
    }
    Ok(())
}

fn verify_coset(n: u64, k_max: u64, cfg: &GalleryConfig, report: &mut VerificationReport) -> Result<()> {
    let cap = odd_cap(n);
    let tol = cfg.engine.tol;
    let mut prev_lower = 0.0f64;
    let mut monotone = true;
    for k in 1..=k_max.max(1) {
        let e = coset(n, k)?;
        let r = alpha_n(&e, n, &cfg.engine)?;
        report.series.push(SeriesPoint { param: k, lower: r.alpha.lower, upper: r.alpha.upper });
        if r.alpha.lower + ANGLE_TOL < prev_lower {
            monotone = false;
        }
        prev_lower = prev_lower.max(r.alpha.lower);
        report.checks.push(
            Check::new(
                format!("alpha_{n} upper, K = {k}"),
                format!("<= pi - pi/{n} + tol"),
                r.alpha.upper,
                r.certified && r.alpha.upper <= cap + tol,
            )
            .exact(r.alpha.exact),
        );
        if n % 2 == 0 {
            let w = even_witness_error(&e, n)?;
            report.checks.push(
                Check::new(
                    format!("witness exp(pi i/{n}) error, K = {k}"),
                    format!("<= pi - pi/{n}"),
                    w.to_radians(),
                    w.to_radians() <= cap + ANGLE_TOL,
                )
                .exact(Some(w)),
            );
        }
        report.brackets.push(LabeledResult { label: format!("alpha_{n}, K = {k}"), result: r });
    }
    report.checks.push(Check::new(
        "lower bounds nondecreasing in K",
        "nondecreasing",
        prev_lower,
        monotone,
    ));
    report.notes.push(format!(
        "Brackets are for the truncations {{1 + {n}k : |k| <= K}}; they bound the constant of the full coset from below only."
    ));
    Ok(())
}

fn verify_mixed(n: u64, cfg: &GalleryConfig, report: &mut VerificationReport) -> Result<()> {
    let (e1, e2) = mixed_halves(n)?;
    let budget = cfg.engine.budget;
    let q1 = quasi_independent(&e1, budget)?;
    let q2 = quasi_independent(&e2, budget)?;
    let qu = quasi_independent(&report.set, budget)?;
    report.checks.push(Check::new("E1 quasi-independent", "true", q1.independent as u8 as f64, q1.independent));
    report.checks.push(Check::new("E2 quasi-independent", "true", q2.independent as u8 as f64, q2.independent));
    report.checks.push(Check::new("E1 u E2 quasi-independent", "false", qu.independent as u8 as f64, !qu.independent));

    let mut prev: Option<ErrorBracket> = None;
    let mut monotone = true;
    for m in 1..=n {
        let b = mixed_sign_error(m, cfg.mixed_tol)?;
        if prev.is_some_and(|p| b.lower < p.lower - cfg.mixed_tol) {
            monotone = false;
        }
        report.series.push(SeriesPoint { param: m, lower: b.lower, upper: b.upper });
        if m <= cfg.mixed_engine_max {
            let full = make_example(&ExampleSpec::Mixed { n: m })?;
            let (a, _) = mixed_halves(m)?;
            let steps: Vec<u64> = full.elements().iter().map(|c| a.index_of(c).is_some() as u64).collect();
            let ap = best_point(&full, &TargetMap::roots(2, &steps)?, &cfg.engine)?;
            let agree = ap.bracket.lower <= b.upper + cfg.engine.tol && b.lower <= ap.bracket.upper + cfg.engine.tol;
            report.checks.push(
                Check::new(format!("engine agrees with decoupled minimum, N = {m}"), "brackets overlap", ap.bracket.lower, agree)
                    .exact(ap.bracket.exact),
            );
        }
        prev = Some(b);
    }
    report.checks.push(Check::new(
        "sign-target error nondecreasing in N",
        "nondecreasing",
        prev.map_or(0.0, |b| b.lower),
        monotone,
    ));
    report.notes.push(
        "Series values are the minimal error for the target pi on E1 and 0 on E2 over the truncation N; they approach pi."
            .into(),
    );
    Ok(())
}

fn verify_hadamard(set: &CharacterSet, q: f64, cfg: &GalleryConfig, report: &mut VerificationReport) -> Result<()> {
    let ks: Vec<i64> = set.elements().iter().map(|c| c.free_coords()[0]).collect();
    let min_ratio = ks.windows(2).map(|w| w[1] as f64 / w[0] as f64).fold(f64::INFINITY, f64::min);
    report.checks.push(Check::new("consecutive ratio", format!(">= {q}"), min_ratio, min_ratio >= q));
    if q >= 3.0 {
        let qi = quasi_independent(set, cfg.engine.budget)?;
        report.checks.push(Check::new("quasi-independent", "true", qi.independent as u8 as f64, qi.independent));
    }
    let ecfg = EngineConfig { tol: cfg.ladder_tol, ..cfg.engine.clone() };
    let r = alpha(set, &ecfg)?;
    report.readings.push(Reading::judge("pi/(q-1)", (PI / (q - 1.0)).min(PI), &r.alpha));
    report.readings.push(Reading::judge("pi(q-1)", angular_distance(PI * (q - 1.0), 0.0), &r.alpha));
    report.checks.push(Check::new(
        "alpha bracket certified",
        format!("width <= {}", cfg.ladder_tol),
        r.alpha.upper - r.alpha.lower,
        r.certified,
    ));
    report.brackets.push(LabeledResult { label: "alpha".into(), result: r });
    report.notes.push("Terms are rounded up one step at a time, n_{j+1} = ceil(q n_j).".into());
    Ok(())
}
