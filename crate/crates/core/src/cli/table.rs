//! Tabular output: CSV, JSON (`{meta, rows}`) and an aligned text view.
//!
//! Floats are written in scientific notation with 17 significant digits so
//! every value round-trips; non-finite values become empty CSV fields and
//! JSON `null`.

use serde::Serialize;
use serde_json::{Map, Number, Value};

use super::config::{Format, RunConfig};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Bool(bool),
    Text(String),
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(i64::from(v))
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// 17 significant digits, e.g. `-1.6000000000000000e-1`.
pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        String::new()
    }
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format_float(*v),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn short_text(&self) -> String {
        match self {
            Cell::Float(v) if v.is_finite() => format!("{v:.9e}"),
            Cell::Float(_) => "-".into(),
            other => other.text(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            Cell::Float(v) if v.is_finite() => {
                // arbitrary_precision keeps the formatted digits verbatim
                Value::Number(format_float(*v).parse::<Number>().expect("formatted float is valid JSON"))
            }
            Cell::Float(_) => Value::Null,
            Cell::Bool(v) => Value::Bool(*v),
            Cell::Text(s) => Value::String(s.clone()),
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Warnings and remarks; land in JSON `meta.notes`.
    pub notes: Vec<String>,
    /// Subset of `notes` that is also reported on stderr.
    pub warnings: Vec<String>,
    /// Extra command-specific metadata for JSON output.
    pub extra: Map<String, Value>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Table {
            columns: columns.into_iter().map(Into::into).collect(),
            ..Default::default()
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn warn(&mut self, msg: impl Into<String>) {
        let msg = msg.into();
        self.notes.push(msg.clone());
        self.warnings.push(msg);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let header: Vec<String> = self.columns.iter().map(|c| csv_field(c)).collect();
        out.push_str(&header.join(","));
        out.push('\n');
        for row in &self.rows {
            let fields: Vec<String> = row.iter().map(|c| csv_field(&c.text())).collect();
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self, cfg: &RunConfig) -> String {
        let mut meta = Map::new();
        meta.insert("schema".into(), Value::from(SCHEMA_VERSION));
        meta.insert("version".into(), Value::from(env!("CARGO_PKG_VERSION")));
        meta.insert("command".into(), Value::from(cfg.command.name()));
        meta.insert("config".into(), to_value(cfg));
        meta.insert("notes".into(), Value::from(self.notes.clone()));
        for (k, v) in &self.extra {
            meta.insert(k.clone(), v.clone());
        }
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, cell)| (c.clone(), cell.json()))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let mut root = Map::new();
        root.insert("meta".into(), Value::Object(meta));
        root.insert("rows".into(), Value::Array(rows));
        let mut s = serde_json::to_string_pretty(&Value::Object(root)).expect("JSON values always serialize");
        s.push('\n');
        s
    }

    pub fn to_pretty(&self) -> String {
        let cells: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(Cell::short_text).collect())
            .collect();
        let widths: Vec<usize> = self
            .columns
            .iter()
            .enumerate()
            .map(|(i, c)| cells.iter().map(|r| r[i].len()).chain([c.len()]).max().unwrap_or(0))
            .collect();
        let line = |fields: &[String]| {
            let parts: Vec<String> = fields
                .iter()
                .zip(&widths)
                .map(|(f, w)| format!("{f:>w$}"))
                .collect();
            parts.join("  ").trim_end().to_string() + "\n"
        };
        let mut out = line(&self.columns);
        out.push_str(&line(&widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>()));
        for r in &cells {
            out.push_str(&line(r));
        }
        for note in &self.notes {
            out.push_str(&format!("# {note}\n"));
        }
        out
    }

    pub fn render(&self, cfg: &RunConfig) -> String {
        if cfg.pretty {
            return self.to_pretty();
        }
        match cfg.format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(cfg),
        }
    }
}

/// serde value of anything serializable; floats keep serde_json's shortest
/// round-trip form.
pub fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("config serializes")
}
