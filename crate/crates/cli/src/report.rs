//! The JSON report document and its flattened table rendering.

use kron_core::{
    Angle, ChordalBracket, DualPoint, ErrorBracket, KroneckerResult, TargetMap, Turns, WorkStats,
};
use serde_json::{json, Map, Value};

pub const SCHEMA_VERSION: u32 = 1;

/// `{radians, turns?}`; `turns` is the exact fraction of 2π as `"p/q"`.
pub fn angle(radians: f64, exact: Option<Turns>) -> Value {
    let mut m = Map::new();
    m.insert("radians".into(), json!(radians));
    if let Some(t) = exact {
        m.insert("turns".into(), json!(t.to_string()));
    }
    Value::Object(m)
}

pub fn target_angle(a: &Angle) -> Value {
    angle(a.radians(), a.exact())
}

pub fn error_bracket(b: &ErrorBracket) -> Value {
    let mut m = Map::new();
    m.insert("lower".into(), json!(b.lower));
    m.insert("upper".into(), json!(b.upper));
    if let Some(t) = b.exact {
        m.insert("exact".into(), angle(t.to_radians(), Some(t)));
    }
    Value::Object(m)
}

pub fn chordal_bracket(b: &ChordalBracket) -> Value {
    json!({ "lower": b.lower, "upper": b.upper })
}

pub fn dual_point(x: &DualPoint) -> Value {
    json!({ "angles": x.angles(), "selections": x.selections() })
}

pub fn target(t: &TargetMap) -> Value {
    let mut m = Map::new();
    if let Some(n) = t.roots_order() {
        m.insert("roots_order".into(), json!(n));
    }
    m.insert("values".into(), Value::Array(t.values().iter().map(target_angle).collect()));
    Value::Object(m)
}

pub fn stats(s: &WorkStats) -> Value {
    serde_json::to_value(s).expect("plain struct")
}

pub fn kronecker(r: &KroneckerResult) -> Value {
    let mut m = Map::new();
    if let Some(n) = r.roots_order {
        m.insert("n".into(), json!(n));
    }
    m.insert("alpha".into(), error_bracket(&r.alpha));
    m.insert("kappa".into(), chordal_bracket(&r.kappa));
    m.insert("certified".into(), json!(r.certified));
    m.insert(
        "witness".into(),
        json!({
            "target": target(&r.worst_target),
            "point": dual_point(&r.witness_point),
            "error": r.witness_error,
        }),
    );
    if !r.ladder.is_empty() {
        let rungs: Vec<Value> = r
            .ladder
            .iter()
            .map(|l| json!({ "n": l.n, "alpha_n": error_bracket(&l.alpha_n), "certified": l.certified }))
            .collect();
        m.insert("ladder".into(), Value::Array(rungs));
    }
    m.insert("stats".into(), stats(&r.stats));
    Value::Object(m)
}

/// Assembles the top-level document. `timestamp` is omitted when `None`.
pub fn document(
    command: &str,
    argv: &[String],
    input: Value,
    settings: Value,
    result: Value,
    certified: bool,
    timestamp: Option<String>,
) -> Value {
    let mut m = Map::new();
    m.insert("schema_version".into(), json!(SCHEMA_VERSION));
    m.insert("command".into(), json!(command));
    m.insert("argv".into(), json!(argv));
    if let Some(ts) = timestamp {
        m.insert("timestamp".into(), json!(ts));
    }
    m.insert("input".into(), input);
    m.insert("settings".into(), settings);
    m.insert("result".into(), result);
    m.insert("certified".into(), json!(certified));
    Value::Object(m)
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                flatten(&key(k), x, out);
            }
        }
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let items: Vec<String> = a.iter().map(scalar).collect();
            out.push((prefix.to_string(), format!("[{}]", items.join(", "))));
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        _ => out.push((prefix.to_string(), scalar(v))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Two aligned columns, one line per leaf of the document.
pub fn table(doc: &Value) -> String {
    let mut rows = Vec::new();
    flatten("", doc, &mut rows);
    let width = rows.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
    let mut s = String::new();
    for (k, v) in rows {
        s.push_str(&format!("{k:<width$}  {v}\n"));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_angles_carry_turns() {
        let t = Turns::new(2, 15);
        let v = angle(t.to_radians(), Some(t));
        assert_eq!(v["turns"], "2/15");
        assert!(angle(1.0, None).get("turns").is_none());
    }

    #[test]
    fn table_flattens_paths() {
        let doc = json!({"a": {"b": 1, "c": [1, 2]}, "d": [{"e": "x"}]});
        let t = table(&doc);
        let rows: Vec<Vec<&str>> = t.lines().map(|l| l.split_whitespace().collect()).collect();
        assert!(rows.contains(&vec!["a.b", "1"]));
        assert!(rows.contains(&vec!["a.c", "[1,", "2]"]));
        assert!(rows.contains(&vec!["d[0].e", "x"]));
    }
}
