use std::f64::consts::PI;
use std::process::{Command, Output};

use kron_cli::parse_set_spec;
use kron_core::{approx_error, Angle, TargetMap, Turns};
use serde_json::Value;

fn kron(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kron")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON document")
}

fn turns(s: &str) -> Turns {
    let (p, q) = s.split_once('/').unwrap();
    Turns::new(p.parse().unwrap(), q.parse().unwrap())
}

/// Recomputes the witness error from the recorded target and point.
fn revalidate(set_text: &str, result: &Value) {
    let set = parse_set_spec(set_text).unwrap();
    let w = &result["witness"];
    let values: Vec<Angle> = w["target"]["values"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| match v.get("turns") {
            Some(t) => Angle::Exact(turns(t.as_str().unwrap())),
            None => Angle::Radians(v["radians"].as_f64().unwrap()),
        })
        .collect();
    let angles: Vec<f64> = w["point"]["angles"].as_array().unwrap().iter().map(|a| a.as_f64().unwrap()).collect();
    let sel: Vec<i64> = w["point"]["selections"].as_array().unwrap().iter().map(|a| a.as_i64().unwrap()).collect();
    let x = set.group().dual_point(angles, sel).unwrap();
    let e = approx_error(&set, &TargetMap::from_values(values), &x).unwrap();
    let recorded = w["error"].as_f64().unwrap();
    assert!((e - recorded).abs() <= 1e-9, "{e} vs {recorded}");
}

#[test]
fn alpha_of_one_two() {
    let out = kron(&["alpha", "--set", "Z : [1],[2]", "--tol", "1e-3", "--no-timestamp"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["certified"], true);
    let a = &doc["result"]["alpha"];
    let (lo, hi) = (a["lower"].as_f64().unwrap(), a["upper"].as_f64().unwrap());
    assert!(lo <= PI / 3.0 + 1e-12 && PI / 3.0 <= hi && hi - lo <= 1e-3, "[{lo}, {hi}]");
    revalidate("Z : [1],[2]", &doc["result"]);
}

#[test]
fn z2cube_gallery_passes() {
    let out = kron(&["gallery", "--example", "z2cube", "--no-timestamp"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    let checks = doc["result"]["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    assert!(checks.iter().all(|c| c["pass"] == true));
    let alpha = doc["result"]["brackets"]
        .as_array()
        .unwrap()
        .iter()
        .find(|b| b["label"] == "alpha")
        .unwrap();
    assert_eq!(alpha["result"]["alpha"]["exact"]["turns"], "1/2");
    assert_eq!(alpha["result"]["kappa"]["upper"], 2.0);
}

#[test]
fn budget_exhaustion_is_partial() {
    let set = "Z : [1],[2],[3],[4],[5],[6],[7],[8]";
    let out = kron(&["alpha-n", "--set", set, "--n", "16", "--budget", "1000", "--no-timestamp"]);
    assert_eq!(out.status.code(), Some(1));
    let doc = json(&out);
    assert_eq!(doc["certified"], false);
    let a = &doc["result"]["alpha"];
    assert!(a["lower"].as_f64().unwrap() <= a["upper"].as_f64().unwrap());
    revalidate(set, &doc["result"]);
}

#[test]
fn reports_are_deterministic() {
    let args = ["alpha-n", "--set", "Z : [1],[4],[7]", "--n", "3", "--no-timestamp"];
    let a = kron(&args);
    let b = kron(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let doc = json(&a);
    assert!(doc.get("timestamp").is_none());
    assert_eq!(doc["result"]["alpha"]["exact"]["turns"], "2/15");
    revalidate("Z : [1],[4],[7]", &doc["result"]);

    let stamped = json(&kron(&args[..5]));
    assert!(stamped["timestamp"].is_string());
}

#[test]
fn recorded_input_reruns() {
    let doc = json(&kron(&["alpha-n", "--set", "Z3 x Z : [1,2],[2,-1]", "--n", "4", "--no-timestamp"]));
    let canonical = doc["input"]["set"].as_str().unwrap().to_string();
    let again = json(&kron(&["alpha-n", "--set", &canonical, "--n", "4", "--no-timestamp"]));
    assert_eq!(doc["result"], again["result"]);
    revalidate(&canonical, &doc["result"]);
}

#[test]
fn exit_codes_for_bad_input() {
    let out = kron(&["alpha", "--set", "Z : [1],[2,3]"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("column 9"), "{err}");
    assert_eq!(json(&out)["result"]["error"]["kind"], "parse");

    assert_eq!(kron(&["alpha-n", "--set", "Z : [1]", "--n", "1"]).status.code(), Some(2));
    assert_eq!(kron(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(kron(&["--help"]).status.code(), Some(0));

    let twenty: Vec<String> = (1..=20).map(|k| format!("[{k}]")).collect();
    let set = format!("Z : {}", twenty.join(","));
    let out = kron(&["quasi", "--set", &set, "--budget", "1000"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["result"]["error"]["kind"], "resource_limit");
}

#[test]
fn quasi_and_b2() {
    let doc = json(&kron(&["quasi", "--set", "Z : [1],[2],[3]", "--no-timestamp"]));
    assert_eq!(doc["result"]["independent"], false);
    assert_eq!(doc["result"]["witness"], serde_json::json!([1, 1, -1]));
    let doc = json(&kron(&["quasi", "--set", "Z : [1],[2],[4],[8]", "--direct"]));
    assert_eq!(doc["result"]["independent"], true);

    let doc = json(&kron(&["b2", "--set", "Z : [1],[2],[3]"]));
    assert_eq!(doc["result"]["count"], 1);
    let doc = json(&kron(&["b2", "--set", "Z : [1],[2],[4],[8]"]));
    assert_eq!(doc["result"]["count"], 0);
}

#[test]
fn net_on_z2_squared() {
    let out = kron(&["net", "--set", "Z2^2 : [1,0],[0,1]", "--n", "2", "--no-timestamp"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &json(&out)["result"];
    assert_eq!(r["cardinality"], 4);
    assert_eq!(r["min_pairwise_distance"], 2.0);
    assert_eq!(r["separated"], true);
    assert_eq!(r["maximal"], true);
    assert_eq!(r["volume_bound"]["holds"], true);
}

#[test]
fn classify_small_sets() {
    let out = kron(&["classify", "--set", "Z : [1],[2]", "--ns", "2,3", "--no-timestamp"]);
    assert_eq!(out.status.code(), Some(0));
    let c = &json(&out)["result"]["classification"];
    assert_eq!(c["i0"], true);
    assert_eq!(c["inconclusive"], false);

    let out = kron(&["classify", "--set", "Z : [0]", "--ns", "2", "--no-timestamp"]);
    let c = &json(&out)["result"]["classification"];
    assert_eq!(c["sidon_by_kappa"], false);
    assert_eq!(c["inconclusive"], true);
}

#[test]
fn hadamard_sweep_csv() {
    let out = kron(&["gallery", "--example", "hadamard", "--sweep-q", "4:6:2"]);
    assert_eq!(out.status.code(), Some(0));
    let mut rdr = csv::Reader::from_reader(&out.stdout[..]);
    let headers = rdr.headers().unwrap().clone();
    assert_eq!(&headers[0], "q");
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 2);
    assert_eq!(&rows[0][0], "4");
    assert_eq!(&rows[0][10], "holds");
    assert_eq!(&rows[0][11], "holds");
}

#[test]
fn pretty_table() {
    let out = kron(&["kappa", "--set", "Z : [5]", "--pretty", "--no-timestamp"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("result.kappa.upper")));
    assert!(text.lines().any(|l| l.starts_with("certified") && l.ends_with("true")));
}
