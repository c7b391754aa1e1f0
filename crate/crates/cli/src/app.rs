//! Argument parsing and subcommand dispatch.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kron_core::gallery::Verdict;
use kron_core::sidon::{default_net_epsilon, quasi_independent_direct};
use kron_core::{
    alpha, alpha_n, b2_coincidences, classify, maximal_separated_set, pisier_report, quasi_independent,
    roots_count_bound, verify_example, volume_bound, CharacterSet, EngineConfig, Error as CoreError,
    ExampleSpec, GalleryConfig, KroneckerResult, VerificationReport,
};
use serde_json::{json, Value};

use crate::report;
use crate::spec_text::{parse_set_spec, SpecError};

pub const EXIT_CERTIFIED: i32 = 0;
pub const EXIT_UNCERTIFIED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

/// Certified Kronecker constants of finite character sets.
#[derive(Parser, Debug)]
#[command(name = "kron", version)]
pub struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Target width of the certified bracket, in radians.
    #[arg(long, global = true, default_value_t = 1e-3)]
    tol: f64,
    /// Work budget (inner evaluations, signings, net candidates).
    #[arg(long, global = true, default_value_t = 100_000_000)]
    budget: u64,
    /// Initial cells per torus coordinate for the grid inner solver.
    #[arg(long, global = true)]
    grid_cells: Option<usize>,
    /// Worker threads; 0 uses the global pool.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Largest rung of the alpha ladder.
    #[arg(long, global = true, default_value_t = 1 << 16)]
    max_n: u64,
    /// Recorded in the report only; every computation is deterministic.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Print a flattened key/value table instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    /// Leave the timestamp out so reruns are byte-identical.
    #[arg(long, global = true)]
    no_timestamp: bool,
}

impl Common {
    fn engine(&self) -> EngineConfig {
        EngineConfig {
            tol: self.tol,
            budget: self.budget,
            grid_cells: self.grid_cells,
            threads: self.threads,
            max_n: self.max_n,
            ..EngineConfig::default()
        }
    }

    fn settings(&self) -> Value {
        json!({
            "tol": self.tol,
            "budget": self.budget,
            "grid_cells": self.grid_cells,
            "threads": self.threads,
            "max_n": self.max_n,
            "seed": self.seed,
        })
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Bracket alpha(E) by the ladder n = 2, 4, 8, ...
    Alpha {
        #[arg(long)]
        set: String,
    },
    /// Bracket alpha_n(E), targets restricted to n-th roots of unity.
    AlphaN {
        #[arg(long)]
        set: String,
        #[arg(long)]
        n: u64,
    },
    /// Chordal constant kappa(E), or kappa_n(E) with --n.
    Kappa {
        #[arg(long)]
        set: String,
        #[arg(long)]
        n: Option<u64>,
    },
    /// Greedy maximal separated set in the dual, with counting bounds.
    Net {
        #[arg(long)]
        set: String,
        /// Chordal separation; defaults to (2 - kappa_upper)/2.
        #[arg(long)]
        epsilon: Option<f64>,
        /// Use this kappa upper bound instead of computing one.
        #[arg(long)]
        kappa_upper: Option<f64>,
        /// Grid points per torus coordinate.
        #[arg(long, default_value_t = 16)]
        grid: u64,
        /// Also report the n-th-roots counting bound.
        #[arg(long)]
        n: Option<u64>,
    },
    /// Search for a relation sum f(g) g = 0 with f in {-1, 0, 1}.
    Quasi {
        #[arg(long)]
        set: String,
        /// Enumerate all 3^|E| signings instead of meeting in the middle.
        #[arg(long)]
        direct: bool,
    },
    /// Count pair-sum coincidences.
    B2 {
        #[arg(long)]
        set: String,
        #[arg(long, default_value_t = 20)]
        max_listed: usize,
    },
    /// Decide the I0 and Sidon sufficient conditions.
    Classify {
        #[arg(long)]
        set: String,
        /// Rungs for the kappa_n conditions.
        #[arg(long, value_delimiter = ',', default_value = "2,3,4")]
        ns: Vec<u64>,
        /// Skip the alpha ladder and use only the kappa_n conditions.
        #[arg(long)]
        no_alpha: bool,
    },
    /// Verify one of the worked examples.
    Gallery {
        #[arg(long, value_enum)]
        example: ExampleKind,
        /// Coset modulus or mixed truncation N.
        #[arg(long)]
        n: Option<u64>,
        /// Coset truncation K.
        #[arg(long)]
        k: Option<u64>,
        /// Hadamard ratio.
        #[arg(long, default_value_t = 4.0)]
        q: f64,
        #[arg(long, default_value_t = 5)]
        length: usize,
        #[arg(long, default_value_t = 1)]
        start: u64,
        /// Width requested from the alpha ladder for Hadamard sets.
        #[arg(long, default_value_t = 0.25)]
        ladder_tol: f64,
        /// Hadamard sweep `a:b:step`, written as CSV.
        #[arg(long)]
        sweep_q: Option<String>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum ExampleKind {
    Z2cube,
    Coset,
    Mixed,
    Hadamard,
}

#[derive(Debug, thiserror::Error)]
enum Failure {
    #[error("--set: {0}")]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("{0}")]
    Usage(String),
    #[error("writing output: {0}")]
    Io(#[from] std::io::Error),
    #[error("writing CSV: {0}")]
    Csv(#[from] csv::Error),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Core(CoreError::ResourceLimit { .. }) => EXIT_RESOURCE,
            _ => EXIT_INVALID,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Failure::Spec(_) => "parse",
            Failure::Core(CoreError::ResourceLimit { .. }) => "resource_limit",
            Failure::Core(_) | Failure::Usage(_) => "invalid_input",
            Failure::Io(_) | Failure::Csv(_) => "io",
        }
    }
}

/// What a subcommand produced: a report body, or CSV already written.
enum Outcome {
    Report { input: Value, result: Value, certified: bool },
    Csv { ok: bool },
}

fn set_input(text: &str, set: &CharacterSet) -> Value {
    json!({ "set_text": text, "set": set.to_string(), "size": set.len() })
}

fn parse(text: &str) -> Result<CharacterSet, Failure> {
    Ok(parse_set_spec(text)?)
}

fn single(text: &str, set: &CharacterSet, r: &KroneckerResult) -> Outcome {
    Outcome::Report { input: set_input(text, set), result: report::kronecker(r), certified: r.certified }
}

fn gallery_json(r: &VerificationReport) -> Value {
    let checks: Vec<Value> = r
        .checks
        .iter()
        .map(|c| {
            let mut v = json!({ "name": c.name, "expected": c.expected, "computed": c.computed, "pass": c.pass });
            if let Some(t) = c.exact {
                v["exact"] = report::angle(t.to_radians(), Some(t));
            }
            v
        })
        .collect();
    let brackets: Vec<Value> = r
        .brackets
        .iter()
        .map(|b| json!({ "label": b.label, "result": report::kronecker(&b.result) }))
        .collect();
    json!({
        "passed": r.passed(),
        "brackets_certified": r.certified(),
        "checks": checks,
        "brackets": brackets,
        "series": r.series,
        "readings": r.readings,
        "notes": r.notes,
    })
}

fn example_spec(kind: ExampleKind, n: Option<u64>, k: Option<u64>, q: f64, length: usize, start: u64) -> ExampleSpec {
    match kind {
        ExampleKind::Z2cube => ExampleSpec::Z2Cube,
        ExampleKind::Coset => ExampleSpec::CosetTruncation { n: n.unwrap_or(3), k: k.unwrap_or(3) },
        ExampleKind::Mixed => ExampleSpec::Mixed { n: n.unwrap_or(4) },
        ExampleKind::Hadamard => ExampleSpec::Hadamard { q, length, start },
    }
}

fn sweep_values(text: &str) -> Result<Vec<f64>, Failure> {
    let bad = || Failure::Usage(format!("--sweep-q expects a:b:step, got '{text}'"));
    let parts: Vec<f64> = text
        .split(':')
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_, _>>()?;
    let [a, b, step] = parts[..] else { return Err(bad()) };
    if !(step > 0.0) || !(a <= b) || !a.is_finite() || !b.is_finite() {
        return Err(bad());
    }
    let count = ((b - a) / step + 1e-9).floor() as u64 + 1;
    if count > 10_000 {
        return Err(Failure::Usage(format!("--sweep-q has {count} points, limit 10000")));
    }
    Ok((0..count).map(|i| a + i as f64 * step).collect())
}

fn verdict_name(r: &VerificationReport, formula: &str) -> &'static str {
    match r.readings.iter().find(|x| x.formula == formula).map(|x| x.verdict) {
        Some(Verdict::Holds) => "holds",
        Some(Verdict::Violated) => "violated",
        Some(Verdict::Undetermined) => "undetermined",
        None => "",
    }
}

fn sweep(qs: &[f64], length: usize, start: u64, cfg: &GalleryConfig, out: &mut dyn Write) -> Result<bool, Failure> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "q",
        "length",
        "start",
        "set",
        "alpha_lower",
        "alpha_upper",
        "kappa_lower",
        "kappa_upper",
        "certified",
        "passed",
        "reading_pi_over_q_minus_1",
        "reading_pi_times_q_minus_1",
    ])?;
    let mut ok = true;
    for &q in qs {
        let r = verify_example(&ExampleSpec::Hadamard { q, length, start }, cfg)?;
        let a = &r.brackets[0].result;
        ok &= r.passed() && r.certified();
        w.write_record([
            q.to_string(),
            length.to_string(),
            start.to_string(),
            r.set.to_string(),
            a.alpha.lower.to_string(),
            a.alpha.upper.to_string(),
            a.kappa.lower.to_string(),
            a.kappa.upper.to_string(),
            a.certified.to_string(),
            r.passed().to_string(),
            verdict_name(&r, "pi/(q-1)").to_string(),
            verdict_name(&r, "pi(q-1)").to_string(),
        ])?;
    }
    w.flush()?;
    Ok(ok)
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<Outcome, Failure> {
    let cfg = cli.common.engine();
    Ok(match &cli.command {
        Command::Alpha { set: text } => {
            let set = parse(text)?;
            single(text, &set, &alpha(&set, &cfg)?)
        }
        Command::AlphaN { set: text, n } => {
            let set = parse(text)?;
            single(text, &set, &alpha_n(&set, *n, &cfg)?)
        }
        Command::Kappa { set: text, n } => {
            let set = parse(text)?;
            let r = match n {
                Some(n) => alpha_n(&set, *n, &cfg)?,
                None => alpha(&set, &cfg)?,
            };
            let mut result = json!({ "kappa": report::chordal_bracket(&r.kappa) });
            result["from"] = report::kronecker(&r);
            Outcome::Report { input: set_input(text, &set), result, certified: r.certified }
        }
        Command::Net { set: text, epsilon, kappa_upper, grid, n } => {
            let set = parse(text)?;
            let (kappa_upper, kappa_certified) = match kappa_upper {
                Some(k) => (*k, true),
                None => {
                    let r = alpha(&set, &cfg)?;
                    (r.kappa.upper, r.certified)
                }
            };
            let eps = match epsilon {
                Some(e) => *e,
                None => default_net_epsilon(kappa_upper).ok_or_else(|| {
                    Failure::Usage(format!("kappa upper bound {kappa_upper} leaves no default separation; pass --epsilon"))
                })?,
            };
            let s = maximal_separated_set(&set, eps, *grid, cfg.budget)?;
            let pisier = pisier_report(&s);
            let separated = s.verify_separation();
            let maximal = s.verify_maximality();
            let c = kappa_upper + eps;
            let volume = if c < 2.0 {
                let (eta, bound) = volume_bound(c, set.len())?;
                json!({ "chord": c, "eta": eta, "bound": bound, "holds": s.len() as f64 >= bound })
            } else {
                json!({ "chord": c, "applicable": false })
            };
            let volume_ok = volume.get("holds").and_then(Value::as_bool).unwrap_or(true);
            let mut result = json!({
                "kappa_upper": kappa_upper,
                "epsilon": eps,
                "grid": s.grid,
                "universe_size": s.universe_size,
                "cardinality": s.len(),
                "min_pairwise_distance": s.min_pairwise_distance(),
                "separated": separated,
                "maximal": maximal,
                "pisier": pisier,
                "volume_bound": volume,
                "points": s.points.iter().map(report::dual_point).collect::<Vec<_>>(),
            });
            if let Some(n) = n {
                result["roots_count_bound"] = json!({ "n": n, "bound": roots_count_bound(*n, set.len())? });
            }
            Outcome::Report {
                input: set_input(text, &set),
                result,
                certified: kappa_certified && separated && maximal && volume_ok,
            }
        }
        Command::Quasi { set: text, direct } => {
            let set = parse(text)?;
            let r = if *direct {
                quasi_independent_direct(&set, cfg.budget)?
            } else {
                quasi_independent(&set, cfg.budget)?
            };
            let result = json!({
                "independent": r.independent,
                "witness": r.witness,
                "signings": r.signings,
                "method": if *direct { "direct" } else { "meet_in_the_middle" },
            });
            Outcome::Report { input: set_input(text, &set), result, certified: true }
        }
        Command::B2 { set: text, max_listed } => {
            let set = parse(text)?;
            let r = b2_coincidences(&set, cfg.budget, *max_listed)?;
            Outcome::Report { input: set_input(text, &set), result: serde_json::to_value(&r).expect("plain struct"), certified: true }
        }
        Command::Classify { set: text, ns, no_alpha } => {
            let set = parse(text)?;
            let mut results = Vec::new();
            if !no_alpha {
                results.push(alpha(&set, &cfg)?);
            }
            for &n in ns {
                results.push(alpha_n(&set, n, &cfg)?);
            }
            let c = classify(&results);
            let certified = results.iter().all(|r| r.certified);
            let result = json!({
                "classification": c,
                "results": results.iter().map(report::kronecker).collect::<Vec<_>>(),
            });
            Outcome::Report { input: set_input(text, &set), result, certified }
        }
        Command::Gallery { example, n, k, q, length, start, ladder_tol, sweep_q } => {
            let gcfg = GalleryConfig { engine: cfg.clone(), ladder_tol: *ladder_tol, ..GalleryConfig::default() };
            if let Some(text) = sweep_q {
                if *example != ExampleKind::Hadamard {
                    return Err(Failure::Usage("--sweep-q applies to --example hadamard".into()));
                }
                let qs = sweep_values(text)?;
                return Ok(Outcome::Csv { ok: sweep(&qs, *length, *start, &gcfg, out)? });
            }
            let spec = example_spec(*example, *n, *k, *q, *length, *start);
            let r = verify_example(&spec, &gcfg)?;
            let input = json!({ "example": spec, "set": r.set.to_string(), "size": r.set.len() });
            let certified = r.passed() && r.certified();
            Outcome::Report { input, result: gallery_json(&r), certified }
        }
    })
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Alpha { .. } => "alpha",
        Command::AlphaN { .. } => "alpha-n",
        Command::Kappa { .. } => "kappa",
        Command::Net { .. } => "net",
        Command::Quasi { .. } => "quasi",
        Command::B2 { .. } => "b2",
        Command::Classify { .. } => "classify",
        Command::Gallery { .. } => "gallery",
    }
}

/// Runs one invocation. `argv[0]` is the program name. Returns the exit code.
pub fn run(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_CERTIFIED };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let name = command_name(&cli.command);
    let timestamp = (!cli.common.no_timestamp).then(|| chrono::Utc::now().to_rfc3339());
    let settings = cli.common.settings();
    let args: Vec<String> = argv.iter().skip(1).cloned().collect();

    let (doc, code) = match execute(&cli, out) {
        Ok(Outcome::Csv { ok }) => return if ok { EXIT_CERTIFIED } else { EXIT_UNCERTIFIED },
        Ok(Outcome::Report { input, result, certified }) => {
            let code = if certified { EXIT_CERTIFIED } else { EXIT_UNCERTIFIED };
            (report::document(name, &args, input, settings, result, certified, timestamp), code)
        }
        Err(e) => {
            let _ = writeln!(err, "kron {name}: {e}");
            let result = json!({ "error": { "kind": e.kind(), "message": e.to_string() } });
            (report::document(name, &args, Value::Null, settings, result, false, timestamp), e.code())
        }
    };
    let text = if cli.common.pretty {
        report::table(&doc)
    } else {
        let mut s = serde_json::to_string_pretty(&doc).expect("JSON values serialize");
        s.push('\n');
        s
    };
    if out.write_all(text.as_bytes()).is_err() {
        return EXIT_INVALID;
    }
    code
}
