//! Ordered report documents and their json, csv and text renderings.
//!
//! Floats are written with 17 significant digits so a report round-trips
//! every `f64` exactly. Non-finite values are written as `null`.

use std::fmt::Write as _;

use clap::ValueEnum;

pub const SCHEMA_VERSION: i64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(i64),
    Num(f64),
    Bool(bool),
    Str(String),
    List(Vec<Value>),
    Map(Report),
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Num(x)
    }
}

impl From<usize> for Value {
    fn from(n: usize) -> Self {
        Value::Int(n as i64)
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::Bool(b)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Str(s.to_owned())
    }
}

impl From<String> for Value {
    fn from(s: String) -> Self {
        Value::Str(s)
    }
}

impl From<Report> for Value {
    fn from(r: Report) -> Self {
        Value::Map(r)
    }
}

impl<T: Into<Value>> From<Vec<T>> for Value {
    fn from(items: Vec<T>) -> Self {
        Value::List(items.into_iter().map(Into::into).collect())
    }
}

impl From<(usize, usize)> for Value {
    fn from((i, j): (usize, usize)) -> Self {
        Value::List(vec![i.into(), j.into()])
    }
}

/// Fields in insertion order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    fields: Vec<(String, Value)>,
}

impl Report {
    /// Top-level report with the schema header.
    pub fn for_command(command: &str) -> Self {
        Self::default()
            .with("schema_version", Value::Int(SCHEMA_VERSION))
            .with("command", command)
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.push(key, value);
        self
    }

    pub fn push(&mut self, key: &str, value: impl Into<Value>) {
        self.fields.push((key.to_owned(), value.into()));
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut out = String::new();
                write_json_map(&mut out, self, 0);
                out.push('\n');
                out
            }
            Format::Csv => render_csv(self),
            Format::Text => {
                let mut out = String::new();
                for (key, value) in self.flatten() {
                    let _ = writeln!(out, "{key}: {value}");
                }
                out
            }
        }
    }

    /// Leaf values keyed by dotted paths, with list positions as `[i]`.
    fn flatten(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for (key, value) in &self.fields {
            flatten_into(&mut out, key.clone(), value);
        }
        out
    }
}

pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".to_owned()
    }
}

fn scalar_text(v: &Value) -> Option<String> {
    match v {
        Value::Int(n) => Some(n.to_string()),
        Value::Num(x) => Some(format_float(*x)),
        Value::Bool(b) => Some(b.to_string()),
        Value::Str(s) => Some(s.clone()),
        Value::List(_) | Value::Map(_) => None,
    }
}

fn flatten_into(out: &mut Vec<(String, String)>, key: String, value: &Value) {
    match value {
        Value::List(items) => {
            if items.is_empty() {
                out.push((key, String::new()));
                return;
            }
            for (i, item) in items.iter().enumerate() {
                flatten_into(out, format!("{key}[{i}]"), item);
            }
        }
        Value::Map(r) => {
            for (sub, v) in &r.fields {
                flatten_into(out, format!("{key}.{sub}"), v);
            }
        }
        scalar => out.push((key, scalar_text(scalar).unwrap_or_default())),
    }
}

fn render_csv(report: &Report) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let rows = std::iter::once(("field".to_owned(), "value".to_owned())).chain(report.flatten());
    for (key, value) in rows {
        w.write_record([key, value]).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("writing to memory")).expect("csv output is utf-8")
}

fn write_json_str(out: &mut String, s: &str) {
    out.push_str(&serde_json::to_string(s).expect("strings always serialize"));
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::List(_) | Value::Map(_))
}

fn write_json(out: &mut String, value: &Value, depth: usize) {
    match value {
        Value::Int(n) => {
            let _ = write!(out, "{n}");
        }
        Value::Num(x) => out.push_str(&format_float(*x)),
        Value::Bool(b) => {
            let _ = write!(out, "{b}");
        }
        Value::Str(s) => write_json_str(out, s),
        Value::List(items) if items.iter().all(is_scalar) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_json(out, item, depth);
            }
            out.push(']');
        }
        Value::List(items) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                indent(out, depth + 1);
                write_json(out, item, depth + 1);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            indent(out, depth);
            out.push(']');
        }
        Value::Map(r) => write_json_map(out, r, depth),
    }
}

fn write_json_map(out: &mut String, report: &Report, depth: usize) {
    if report.fields.is_empty() {
        out.push_str("{}");
        return;
    }
    out.push_str("{\n");
    for (i, (key, value)) in report.fields.iter().enumerate() {
        indent(out, depth + 1);
        write_json_str(out, key);
        out.push_str(": ");
        write_json(out, value, depth + 1);
        out.push_str(if i + 1 < report.fields.len() {
            ",\n"
        } else {
            "\n"
        });
    }
    indent(out, depth);
    out.push('}');
}

fn indent(out: &mut String, depth: usize) {
    for _ in 0..depth {
        out.push_str("  ");
    }
}
