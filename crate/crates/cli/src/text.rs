//! Plain-text rendering of command output.

use std::fmt::Write;

use eiscong::oracle::BatteryReport;
use eiscong::CyclotomicNumber;
use serde_json::Value;

/// One `path: value` line per leaf, with cyclotomic numbers, places and
/// scalar lists written inline.
pub fn render(v: &Value) -> String {
    let mut out = String::new();
    walk(v, "", &mut out);
    out
}

fn walk(v: &Value, path: &str, out: &mut String) {
    if let Some(s) = inline(v) {
        if path.is_empty() {
            writeln!(out, "{s}").unwrap();
        } else {
            writeln!(out, "{path}: {s}").unwrap();
        }
        return;
    }
    let join = |key: &str| if path.is_empty() { key.to_string() } else { format!("{path}.{key}") };
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                walk(x, &join(k), out);
            }
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                walk(x, &join(&i.to_string()), out);
            }
        }
        _ => unreachable!("scalars are inline"),
    }
}

fn inline(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => {
            Some(format!("[{}]", items.iter().map(|x| inline(x).unwrap()).collect::<Vec<_>>().join(", ")))
        }
        Value::Object(map) => {
            if map.len() == 2 && map.contains_key("order") && map.contains_key("coeffs") {
                let x: CyclotomicNumber = serde_json::from_value(v.clone()).ok()?;
                return Some(x.to_string());
            }
            if map.len() == 3 && ["ell", "m", "min_poly"].iter().all(|k| map.contains_key(*k)) {
                return Some(format!("ell {} m {} min_poly {}", map["ell"], map["m"], inline(&map["min_poly"])?));
            }
            None
        }
        _ => None,
    }
}

pub fn battery_table(r: &BatteryReport, tolerance: f64) -> String {
    let mut out = String::new();
    writeln!(out, "{:>3} {:>3} {:>2} {:>2}  {:<24} {:>11}  result", "f1", "f2", "k", "M", "gamma", "gap").unwrap();
    for row in &r.rows {
        let g = row.gamma;
        let gamma = format!("[{},{};{},{}]", g.u, g.beta, g.v, g.delta);
        let verdict = if row.pass { "PASS" } else { "FAIL" };
        writeln!(out, "{:>3} {:>3} {:>2} {:>2}  {:<24} {:>11.3e}  {verdict}", row.f1, row.f2, row.k, row.m, gamma, row.gap)
            .unwrap();
    }
    writeln!(out, "passed {} failed {} max gap {:.3e} tolerance {:.1e}", r.passed, r.failed, r.max_gap, tolerance).unwrap();
    out
}

pub fn oracle_table(v: &Value) -> String {
    let mut out = String::new();
    let verdict = |row: &Value| if row["pass"].as_bool() == Some(true) { "PASS" } else { "FAIL" };
    let gap = |row: &Value| row["gap"].as_f64().unwrap_or(f64::NAN);
    writeln!(out, "gauss sums").unwrap();
    for row in v["gauss_sums"].as_array().into_iter().flatten() {
        let chi = &row["character"];
        writeln!(out, "  q {:>3} order {:>2}  gap {:>11.3e}  {}", chi["modulus"], chi["order"], gap(row), verdict(row)).unwrap();
    }
    writeln!(out, "L-values").unwrap();
    for row in v["l_values"].as_array().into_iter().flatten() {
        let chi = &row["character"];
        writeln!(
            out,
            "  q {:>3} order {:>2} k {}  gap {:>11.3e}  {}",
            chi["modulus"],
            chi["order"],
            row["k"],
            gap(row),
            verdict(row)
        )
        .unwrap();
    }
    writeln!(out, "passed {} failed {} max gap {:.3e}", v["passed"], v["failed"], v["max_gap"].as_f64().unwrap_or(f64::NAN))
        .unwrap();
    out
}
