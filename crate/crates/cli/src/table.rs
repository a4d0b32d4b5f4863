//! Tabular records and their CSV/JSON encodings.

use std::io::Write;
use std::path::Path;

use clap::ValueEnum;
use serde_json::{Map, Number, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Debug)]
pub enum Cell {
    /// Decimal integer of any size, kept as text.
    Int(String),
    Float(f64),
    Bool(bool),
    Text(String),
    Null,
    List(Vec<Cell>),
}

impl Cell {
    pub fn int(x: impl ToString) -> Cell {
        Cell::Int(x.to_string())
    }

    fn csv(&self) -> String {
        match self {
            Cell::Int(s) | Cell::Text(s) => s.clone(),
            Cell::Float(x) => float(*x),
            Cell::Bool(b) => b.to_string(),
            Cell::Null => String::new(),
            Cell::List(items) => items.iter().map(Cell::csv).collect::<Vec<_>>().join(";"),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(s) => number(s),
            Cell::Float(x) if x.is_finite() => number(&float(*x)),
            Cell::Float(_) | Cell::Null => Value::Null,
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::List(items) => Value::Array(items.iter().map(Cell::json).collect()),
        }
    }
}

/// 17 significant digits, enough to round-trip every `f64`.
pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

fn number(text: &str) -> Value {
    Value::Number(text.parse::<Number>().expect("numeric literal"))
}

pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Table { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> Vec<u8> {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.columns).expect("in-memory write");
                for row in &self.rows {
                    w.write_record(row.iter().map(Cell::csv)).expect("in-memory write");
                }
                w.into_inner().expect("in-memory flush")
            }
            Format::Json => {
                let records: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let obj: Map<String, Value> =
                            self.columns.iter().zip(row).map(|(c, v)| (c.to_string(), v.json())).collect();
                        Value::Object(obj)
                    })
                    .collect();
                let mut out = serde_json::to_vec_pretty(&Value::Array(records)).expect("serializable");
                out.push(b'\n');
                out
            }
        }
    }
}

/// Writes the whole payload to `path` through a sibling temporary file, so readers never see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
