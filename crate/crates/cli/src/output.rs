//! CSV and JSON writers shared by the experiment commands.
//!
//! CSV files start with `# key: value` metadata lines, then a header row.
//! Floats are written with 17 significant digits; `+∞` is written `inf` in
//! CSV and `null` in JSON.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::CliError;

/// Version tag of the output layout.
pub const SCHEMA: &str = "qtur-output/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Ordered key-value metadata.
#[derive(Debug, Clone, Default)]
pub struct Metadata {
    entries: Vec<(String, Value)>,
}

impl Metadata {
    pub fn new(command: &str) -> Self {
        let mut m = Self::default();
        m.push("schema", SCHEMA);
        m.push("command", command);
        m.push("qtur_cli_version", env!("CARGO_PKG_VERSION"));
        m.push("qtur_core_version", qtur_core::VERSION);
        m
    }

    pub fn push(&mut self, key: &str, value: impl Into<Value>) {
        self.entries.push((key.to_string(), value.into()));
    }

    fn to_json(&self) -> Value {
        let map: Map<String, Value> = self.entries.iter().cloned().collect();
        Value::Object(map)
    }
}

/// One table: a header and rows of cells.
#[derive(Debug, Clone)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Int(u64),
    Float(f64),
    Bool(bool),
}

impl Cell {
    fn csv(&self) -> String {
        match *self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format_float(v),
            Cell::Bool(v) => v.to_string(),
        }
    }

    fn json(&self) -> Value {
        match *self {
            Cell::Int(v) => v.into(),
            // non-finite floats have no JSON number; `Value::from` maps them to null
            Cell::Float(v) => v.into(),
            Cell::Bool(v) => v.into(),
        }
    }
}

/// `{:.16e}`, i.e. 17 significant digits, with `inf`, `-inf` and `nan`.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{v:.16e}")
    }
}

pub fn write_csv<W: Write>(out: W, meta: &Metadata, table: &Table) -> io::Result<()> {
    let mut out = out;
    for (key, value) in &meta.entries {
        let text = match value {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        writeln!(out, "# {key}: {text}")?;
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(&table.header)?;
    for row in &table.rows {
        w.write_record(row.iter().map(Cell::csv))?;
    }
    w.flush()
}

pub fn write_json<W: Write>(out: W, meta: &Metadata, table: &Table) -> io::Result<()> {
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|row| {
            let obj: Map<String, Value> = table
                .header
                .iter()
                .zip(row)
                .map(|(k, c)| (k.to_string(), c.json()))
                .collect();
            Value::Object(obj)
        })
        .collect();
    let doc = Document {
        metadata: meta.to_json(),
        rows,
    };
    let mut out = out;
    serde_json::to_writer_pretty(&mut out, &doc)?;
    writeln!(out)?;
    out.flush()
}

#[derive(Serialize)]
struct Document {
    metadata: Value,
    rows: Vec<Value>,
}

/// Writes `table` to `path`, or to stdout without a path.
pub fn emit(path: Option<&Path>, format: Format, meta: &Metadata, table: &Table) -> Result<(), CliError> {
    let result = match path {
        Some(p) => {
            let file = File::create(p).map_err(|e| CliError::io(p, e))?;
            write_table(BufWriter::new(file), format, meta, table).map_err(|e| CliError::io(p, e))
        }
        None => write_table(io::stdout().lock(), format, meta, table).map_err(|e| CliError::io(Path::new("-"), e)),
    };
    result
}

fn write_table<W: Write>(out: W, format: Format, meta: &Metadata, table: &Table) -> io::Result<()> {
    match format {
        Format::Csv => write_csv(out, meta, table),
        Format::Json => write_json(out, meta, table),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> (Metadata, Table) {
        let mut meta = Metadata::new("test");
        meta.push("seed", 3u64);
        let table = Table {
            header: vec!["index", "x", "flag"],
            rows: vec![
                vec![Cell::Int(0), Cell::Float(0.1), Cell::Bool(true)],
                vec![Cell::Int(1), Cell::Float(f64::INFINITY), Cell::Bool(false)],
            ],
        };
        (meta, table)
    }

    #[test]
    fn floats_round_trip() {
        for v in [0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300, f64::MIN_POSITIVE] {
            assert_eq!(format_float(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(format_float(f64::INFINITY), "inf");
    }

    #[test]
    fn csv_has_metadata_then_header() {
        let (meta, table) = sample();
        let mut buf = Vec::new();
        write_csv(&mut buf, &meta, &table).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], format!("# schema: {SCHEMA}"));
        assert!(lines.contains(&"# seed: 3"));
        let body: Vec<&str> = lines.iter().copied().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(body[0], "index,x,flag");
        assert_eq!(body[1], "0,1.0000000000000001e-1,true");
        assert_eq!(body[2], "1,inf,false");
    }

    #[test]
    fn json_round_trips_through_parser() {
        let (meta, table) = sample();
        let mut buf = Vec::new();
        write_json(&mut buf, &meta, &table).unwrap();
        let v: Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v["metadata"]["seed"], 3);
        assert_eq!(v["rows"][0]["x"].as_f64(), Some(0.1));
        assert!(v["rows"][1]["x"].is_null());
        assert_eq!(v["rows"].as_array().unwrap().len(), 2);
    }
}
