//! Tables written as CSV with `#` metadata lines, or as newline-delimited
//! JSON whose first object carries the metadata.

use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use serde_json::{Map, Value};

use crate::args::Format;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            // Debug formatting is the shortest string that round-trips
            Cell::Float(v) => format!("{v:?}"),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            Cell::Float(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Empty => Value::Null,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

/// Run description written ahead of the rows.
#[derive(Debug, Clone, Default)]
pub struct Meta {
    pub command: String,
    pub seed: u64,
    /// Effective flag values, in display order.
    pub flags: Vec<(String, String)>,
}

#[derive(Debug, Clone)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table { columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width does not match the header");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| *c == name)
    }
}

pub fn render(table: &Table, meta: &Meta, format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Csv => render_csv(table, meta),
        Format::Json => render_json(table, meta),
    }
}

fn render_csv(table: &Table, meta: &Meta) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    writeln!(buf, "# levy {}", env!("CARGO_PKG_VERSION"))?;
    writeln!(buf, "# command: {}", meta.command)?;
    writeln!(buf, "# seed: {}", meta.seed)?;
    let flags: Vec<String> = meta.flags.iter().map(|(k, v)| format!("--{k} {v}")).collect();
    writeln!(buf, "# flags: {}", flags.join(" "))?;
    let mut w = csv::Writer::from_writer(buf);
    w.write_record(&table.columns)?;
    for row in &table.rows {
        w.write_record(row.iter().map(Cell::csv))?;
    }
    w.into_inner().context("flushing CSV output")
}

fn render_json(table: &Table, meta: &Meta) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    let mut flags = Map::new();
    for (k, v) in &meta.flags {
        flags.insert(k.clone(), Value::from(v.as_str()));
    }
    let header = serde_json::json!({
        "meta": {
            "version": env!("CARGO_PKG_VERSION"),
            "command": meta.command,
            "seed": meta.seed,
            "flags": flags,
        }
    });
    serde_json::to_writer(&mut buf, &header)?;
    buf.push(b'\n');
    for row in &table.rows {
        let obj: Map<String, Value> =
            table.columns.iter().zip(row).map(|(c, v)| ((*c).to_owned(), v.json())).collect();
        serde_json::to_writer(&mut buf, &obj)?;
        buf.push(b'\n');
    }
    Ok(buf)
}

/// Writes `bytes` to `path`, or to standard output.
pub fn emit(bytes: &[u8], path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, bytes).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)?;
            out.flush().context("writing to standard output")
        }
    }
}
