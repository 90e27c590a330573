//! CSV and JSON emission of field tables.
//!
//! Floats are written with 17 significant digits and a lowercase exponent
//! so that identical runs give byte-identical files.

use latdiff::FieldTable;
use serde::Serialize;
use serde_json::value::RawValue;
use std::fmt::Write as _;

pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn raw(v: f64) -> Box<RawValue> {
    if v.is_finite() {
        RawValue::from_string(fmt_f64(v)).expect("formatted float is valid JSON")
    } else {
        RawValue::from_string("null".into()).expect("null is valid JSON")
    }
}

fn raw_opt(v: Option<f64>) -> Box<RawValue> {
    v.map_or_else(|| RawValue::from_string("null".into()).expect("valid"), raw)
}

#[derive(Serialize)]
struct JsonEntry {
    m: i32,
    n: i32,
    re: Box<RawValue>,
    im: Box<RawValue>,
}

#[derive(Serialize)]
struct JsonTable<'a> {
    method: &'a str,
    k: [Box<RawValue>; 2],
    phi_in: Box<RawValue>,
    params: Vec<(&'a str, &'a str)>,
    max_stencil_residual: Box<RawValue>,
    max_boundary_residual: Box<RawValue>,
    entries: Vec<JsonEntry>,
}

pub fn to_json(t: &FieldTable) -> String {
    let doc = JsonTable {
        method: &t.method,
        k: [raw(t.k.re), raw(t.k.im)],
        phi_in: raw_opt(t.phi_in),
        params: t.params.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect(),
        max_stencil_residual: raw_opt(t.max_stencil_residual),
        max_boundary_residual: raw_opt(t.max_boundary_residual),
        entries: t.entries().map(|(m, n, v)| JsonEntry { m, n, re: raw(v.re), im: raw(v.im) }).collect(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("table serialises");
    s.push('\n');
    s
}

pub fn to_csv(t: &FieldTable) -> String {
    let mut s = String::new();
    let opt = |v: Option<f64>| v.map_or_else(|| "none".to_string(), fmt_f64);
    writeln!(s, "# method: {}", t.method).unwrap();
    writeln!(s, "# k: {} {}", fmt_f64(t.k.re), fmt_f64(t.k.im)).unwrap();
    writeln!(s, "# phi_in: {}", opt(t.phi_in)).unwrap();
    for (key, val) in &t.params {
        writeln!(s, "# {key}: {val}").unwrap();
    }
    writeln!(s, "# max_stencil_residual: {}", opt(t.max_stencil_residual)).unwrap();
    writeln!(s, "# max_boundary_residual: {}", opt(t.max_boundary_residual)).unwrap();
    s.push_str("m,n,re,im\n");
    for (m, n, v) in t.entries() {
        writeln!(s, "{m},{n},{},{}", fmt_f64(v.re), fmt_f64(v.im)).unwrap();
    }
    s
}
