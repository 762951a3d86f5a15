//! JSON and CSV renderings of results.

use std::fmt::Write as _;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Value as Json};

use crate::graph::{Lp, Value};
use crate::isoperimetry::{FolnerValue, IsoCurve};
use crate::profiles::ProfileCurve;
use crate::solvers::{ConstantResult, Mode};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Debug, Serialize)]
pub struct WindowInfo {
    pub preset: String,
    pub radius: u32,
}

/// One row of a curve table.
#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub n: u64,
    pub value: Value,
    pub mode: &'static str,
    pub witness_size: usize,
}

pub fn profile_rows(curve: &ProfileCurve) -> Vec<Row> {
    curve
        .points
        .iter()
        .map(|q| Row { n: q.n as u64, value: q.value, mode: q.mode.name(), witness_size: curve.witness_size(q) })
        .collect()
}

pub fn folner_rows(values: &[FolnerValue]) -> Vec<Row> {
    values
        .iter()
        .map(|f| Row {
            n: f.n as u64,
            value: f.size.map_or(Value::Infinite, |s| Value::Finite(s as f64)),
            mode: f.mode.name(),
            witness_size: f.size.unwrap_or(0),
        })
        .collect()
}

/// Rows of an integer-valued curve; every value is exact on its range.
pub fn iso_rows(curve: &IsoCurve) -> Vec<Row> {
    curve
        .points
        .iter()
        .map(|&(n, v)| Row { n, value: Value::Finite(v as f64), mode: "exact", witness_size: 0 })
        .collect()
}

fn value_json(v: Value) -> Json {
    match v {
        Value::Finite(x) => json!(x),
        Value::Infinite => json!("inf"),
    }
}

fn value_csv(v: Value) -> String {
    match v {
        Value::Finite(x) => format!("{x}"),
        Value::Infinite => "inf".into(),
    }
}

/// A curve document. `p` is omitted for curves that do not depend on it.
pub fn curve(format: Format, window: &WindowInfo, p: Option<Lp>, extra: Json, rows: &[Row]) -> String {
    match format {
        Format::Json => {
            let points: Vec<Json> = rows
                .iter()
                .map(
                    |r| json!({"n": r.n, "value": value_json(r.value), "mode": r.mode, "witness_size": r.witness_size}),
                )
                .collect();
            let mut doc = json!({"tool_version": TOOL_VERSION, "window": window});
            if let Some(p) = p {
                doc["p"] = json!(p);
            }
            if let Json::Object(extra) = extra {
                doc.as_object_mut().expect("object").extend(extra);
            }
            doc["points"] = Json::Array(points);
            format!("{doc}\n")
        }
        Format::Csv => {
            let mut s = String::from("n,value,mode,witness_size\n");
            for r in rows {
                let _ = writeln!(s, "{},{},{},{}", r.n, value_csv(r.value), r.mode, r.witness_size);
            }
            s
        }
    }
}

pub fn constant(format: Format, window: &WindowInfo, size: usize, free: usize, r: &ConstantResult) -> String {
    let certificate = r.certificate.as_ref().map(|f| json!({"support": f.support_size(), "max": f.max()}));
    let (lower, upper) = match r.mode {
        Mode::Bracket { lower, upper } => (Some(lower), Some(upper)),
        _ => (None, None),
    };
    match format {
        Format::Json => {
            let doc = json!({
                "tool_version": TOOL_VERSION,
                "window": window,
                "p": r.p,
                "vertices": size,
                "free": free,
                "value": value_json(r.value),
                "mode": r.mode.name(),
                "lower": lower,
                "upper": upper,
                "solver": r.solver,
                "certificate": certificate,
            });
            format!("{doc}\n")
        }
        Format::Csv => format!(
            "p,value,mode,solver,vertices,free\n{},{},{},{},{size},{free}\n",
            r.p,
            value_csv(r.value),
            r.mode.name(),
            r.solver
        ),
    }
}

/// A flat record as JSON, or as a two-line CSV with the same keys.
pub fn record(format: Format, window: &WindowInfo, fields: &[(&str, Json)]) -> String {
    match format {
        Format::Json => {
            let mut doc = json!({"tool_version": TOOL_VERSION, "window": window});
            for (k, v) in fields {
                doc[*k] = v.clone();
            }
            format!("{doc}\n")
        }
        Format::Csv => {
            let keys: Vec<&str> = fields.iter().map(|f| f.0).collect();
            let values: Vec<String> = fields
                .iter()
                .map(|f| match &f.1 {
                    Json::String(s) => s.clone(),
                    other => other.to_string(),
                })
                .collect();
            format!("{}\n{}\n", keys.join(","), values.join(","))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn info() -> WindowInfo {
        WindowInfo { preset: "zd:1".into(), radius: 5 }
    }

    #[test]
    fn json_encodes_infinity_as_string() {
        let rows = [
            Row { n: 1, value: Value::Finite(0.5), mode: "exact", witness_size: 3 },
            Row { n: 2, value: Value::Infinite, mode: "unattained", witness_size: 0 },
        ];
        let s = curve(Format::Json, &info(), Some(Lp::Infinity), Json::Null, &rows);
        let doc: Json = serde_json::from_str(&s).unwrap();
        assert_eq!(doc["p"], "inf");
        assert_eq!(doc["window"]["radius"], 5);
        assert_eq!(doc["points"][0]["value"], 0.5);
        assert_eq!(doc["points"][1]["value"], "inf");
        assert_eq!(doc["points"][1]["witness_size"], 0);
    }

    #[test]
    fn csv_has_header_even_when_empty() {
        assert_eq!(curve(Format::Csv, &info(), None, Json::Null, &[]), "n,value,mode,witness_size\n");
        let rows = [Row { n: 4, value: Value::Infinite, mode: "exact", witness_size: 7 }];
        assert_eq!(curve(Format::Csv, &info(), None, Json::Null, &rows), "n,value,mode,witness_size\n4,inf,exact,7\n");
    }
}
