//! Deterministic JSON and CSV emission.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::error::CliError;

/// Floats with 17 significant digits; non-finite values are `null`.
pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".to_string()
    }
}

fn csv_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

pub fn to_value<T: Serialize>(v: &T) -> Result<Value, CliError> {
    serde_json::to_value(v).map_err(|e| CliError::Numeric(format!("serialization failed: {e}")))
}

/// Pretty-prints `value` with sorted keys and fixed float formatting.
pub fn to_json(value: &Value) -> String {
    let mut out = String::new();
    write_value(value, 0, &mut out);
    out.push('\n');
    out
}

fn write_value(value: &Value, indent: usize, out: &mut String) {
    match value {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => match (n.as_u64(), n.as_i64()) {
            (Some(u), _) if !n.is_f64() => write!(out, "{u}").unwrap(),
            (_, Some(i)) if !n.is_f64() => write!(out, "{i}").unwrap(),
            _ => out.push_str(&format_float(n.as_f64().unwrap_or(f64::NAN))),
        },
        Value::String(s) => out.push_str(&serde_json::to_string(s).expect("strings serialize")),
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                out.push_str(if i == 0 { "\n" } else { ",\n" });
                pad(indent + 1, out);
                write_value(item, indent + 1, out);
            }
            out.push('\n');
            pad(indent, out);
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push('{');
            for (i, (k, v)) in map.iter().enumerate() {
                out.push_str(if i == 0 { "\n" } else { ",\n" });
                pad(indent + 1, out);
                out.push_str(&serde_json::to_string(k).expect("strings serialize"));
                out.push_str(": ");
                write_value(v, indent + 1, out);
            }
            out.push('\n');
            pad(indent, out);
            out.push('}');
        }
    }
}

fn pad(indent: usize, out: &mut String) {
    for _ in 0..indent {
        out.push_str("  ");
    }
}

/// A CSV cell.
pub enum Cell {
    Float(f64),
    Bool(bool),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Float(x) => csv_float(*x),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Self { header, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        self.rows.push(row);
    }

    /// `field,value` rows for the scalar top-level entries of an object.
    pub fn from_scalars(value: &Value) -> Self {
        let mut t = Table::new(vec!["field", "value"]);
        if let Value::Object(map) = value {
            for (k, v) in map {
                let cell = match v {
                    Value::Number(n) if !n.is_f64() => Cell::Text(n.to_string()),
                    Value::Number(n) => Cell::Float(n.as_f64().unwrap_or(f64::NAN)),
                    Value::Bool(b) => Cell::Bool(*b),
                    Value::String(s) => Cell::Text(s.clone()),
                    Value::Null => Cell::Float(f64::NAN),
                    _ => continue,
                };
                t.push(vec![Cell::Text(k.clone()), cell]);
            }
        }
        t
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let csv_err = |e: csv::Error| CliError::Numeric(format!("csv encoding failed: {e}"));
        w.write_record(&self.header).map_err(csv_err)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render)).map_err(csv_err)?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| CliError::Numeric(format!("csv encoding failed: {e}")))?;
        String::from_utf8(bytes).map_err(|e| CliError::Numeric(format!("csv encoding failed: {e}")))
    }
}

/// Writes `text` to `path`, or to stdout when no path is given.
pub fn emit(text: &str, path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::io(p, e)),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::io("<stdout>", e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn floats_use_seventeen_digits() {
        assert_eq!(format_float(0.1), "1.0000000000000001e-1");
        assert_eq!(format_float(2.0), "2.0000000000000000e0");
        assert_eq!(format_float(f64::INFINITY), "null");
    }

    #[test]
    fn json_is_sorted_and_parses_back() {
        let v = json!({"b": [1, 2.5], "a": {"x": null, "y": true}, "c": "s\"q"});
        let text = to_json(&v);
        assert!(text.find("\"a\"").unwrap() < text.find("\"b\"").unwrap());
        let back: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(back["b"][1], json!(2.5));
        assert_eq!(back["b"][0], json!(1));
        assert_eq!(back["c"], json!("s\"q"));
    }

    #[test]
    fn csv_renders_non_finite() {
        let mut t = Table::new(vec!["theta", "rho", "unbounded"]);
        t.push(vec![Cell::Float(0.0), Cell::Float(f64::INFINITY), Cell::Bool(true)]);
        let s = t.to_csv().unwrap();
        assert_eq!(s, "theta,rho,unbounded\n0.0000000000000000e0,inf,true\n");
    }
}
