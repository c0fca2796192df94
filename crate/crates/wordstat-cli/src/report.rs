//! Uniform output: a few header fields plus an optional table.

use serde_json::{Map, Value};
use wordstat::rational::fmt_rational;
use wordstat::Q;

use crate::args::Format;

#[derive(Debug, Default)]
pub struct Report {
    pub fields: Vec<(String, Value)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

/// Rationals travel as `"p/q"` strings.
pub fn rat(x: &Q) -> Value {
    Value::String(fmt_rational(x))
}

pub fn label(l: &[usize]) -> Value {
    Value::Array(l.iter().map(|&x| Value::from(x)).collect())
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::String(s) => s.clone(),
        Value::Array(xs) => format!("({})", xs.iter().map(cell).collect::<Vec<_>>().join(",")),
        other => other.to_string(),
    }
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn field(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.fields.push((key.to_string(), value.into()));
        self
    }

    pub fn columns(mut self, cols: &[&str]) -> Self {
        self.columns = cols.iter().map(|c| c.to_string()).collect();
        self
    }

    pub fn row(&mut self, values: Vec<Value>) {
        self.rows.push(values);
    }

    /// JSON with keys in sorted order, so re-serializing parsed output is
    /// byte-identical.
    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        for (k, v) in &self.fields {
            obj.insert(k.clone(), v.clone());
        }
        if !self.columns.is_empty() {
            let rows = self
                .rows
                .iter()
                .map(|r| {
                    Value::Object(
                        self.columns
                            .iter()
                            .cloned()
                            .zip(r.iter().cloned())
                            .collect(),
                    )
                })
                .collect();
            obj.insert("rows".into(), Value::Array(rows));
        }
        Value::Object(obj)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json()).expect("serializable");
                s.push('\n');
                s
            }
            Format::Table => self.table(),
            Format::Csv => self.csv(),
        }
    }

    fn table(&self) -> String {
        if self.columns.is_empty() && self.fields.len() == 1 {
            return format!("{}\n", cell(&self.fields[0].1));
        }
        let mut out = String::new();
        for (k, v) in &self.fields {
            out.push_str(&format!("{k}: {}\n", cell(v)));
        }
        if self.columns.is_empty() {
            return out;
        }
        if !self.fields.is_empty() {
            out.push('\n');
        }
        let cells: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(cell).collect())
            .collect();
        let widths: Vec<usize> = (0..self.columns.len())
            .map(|c| {
                cells
                    .iter()
                    .map(|r| r[c].chars().count())
                    .chain([self.columns[c].chars().count()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let line = |values: Vec<&str>| {
            let parts: Vec<String> = values
                .iter()
                .zip(&widths)
                .map(|(v, &w)| format!("{v:<w$}"))
                .collect();
            format!("{}\n", parts.join("  ").trim_end())
        };
        out.push_str(&line(self.columns.iter().map(String::as_str).collect()));
        for r in &cells {
            out.push_str(&line(r.iter().map(String::as_str).collect()));
        }
        out
    }

    fn csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.fields {
            out.push_str(&format!("# {k}={}\n", cell(v)));
        }
        if !self.columns.is_empty() {
            out.push_str(&self.columns.join(","));
            out.push('\n');
            for r in &self.rows {
                let parts: Vec<String> = r.iter().map(|v| cell(v).replace(',', ";")).collect();
                out.push_str(&parts.join(","));
                out.push('\n');
            }
        }
        out
    }
}
