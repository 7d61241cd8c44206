//! Report rendering: JSON, CSV and whitespace-column plot data, with every
//! floating value rounded to 15 significant digits.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};
use clap::ValueEnum;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    PlotData,
}

#[derive(Debug, Clone)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

macro_rules! int_cells {
    ($($t:ty),*) => {$(
        impl From<$t> for Cell {
            fn from(v: $t) -> Self {
                Cell::Text(v.to_string())
            }
        }
    )*};
}
int_cells!(usize, u64, i64, bool);

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(v) => fmt_num(*v),
            Cell::Text(s) => s.clone(),
        }
    }
}

/// Rows for the CSV and plot-data formats; column names are part of the
/// output contract.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table { columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// A command result: the JSON document, its tabular projection, and summary
/// lines for the error stream.
#[derive(Debug, Clone)]
pub struct Report {
    pub json: Value,
    pub table: Table,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(json: Value, table: Table) -> Self {
        Report { json, table, notes: Vec::new() }
    }

    pub fn note(mut self, line: impl Into<String>) -> Self {
        self.notes.push(line.into());
        self
    }
}

pub fn round15(v: f64) -> f64 {
    if !v.is_finite() {
        return v;
    }
    let r: f64 = format!("{v:.14e}").parse().unwrap_or(v);
    // drops the sign of negative zero
    r + 0.0
}

/// Decimal with at most 15 significant digits; exponent form outside
/// `[1e-5, 1e15)`.
pub fn fmt_num(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf" } else { "-inf" }.into();
    }
    let r = round15(v);
    let a = r.abs();
    if a == 0.0 || (1e-5..1e15).contains(&a) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

fn round_json(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(r) = n.as_f64().and_then(|f| serde_json::Number::from_f64(round15(f))) {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_json),
        Value::Object(map) => map.values_mut().for_each(round_json),
        _ => {}
    }
}

fn write_plot(out: &mut dyn Write, table: &Table) -> io::Result<()> {
    writeln!(out, "# {}", table.columns.join(" "))?;
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(|c| c.render().replace(char::is_whitespace, "_")).collect();
        writeln!(out, "{}", cells.join(" "))?;
    }
    Ok(())
}

pub fn render(report: &Report, format: Format, out: &mut dyn Write) -> Result<()> {
    match format {
        Format::Json => {
            let mut doc = report.json.clone();
            round_json(&mut doc);
            serde_json::to_writer_pretty(&mut *out, &doc)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(&report.table.columns)?;
            for row in &report.table.rows {
                w.write_record(row.iter().map(Cell::render))?;
            }
            w.flush()?;
        }
        Format::PlotData => write_plot(out, &report.table)?,
    }
    Ok(())
}

pub fn emit(report: &Report, format: Format, path: Option<&Path>) -> Result<()> {
    for line in &report.notes {
        eprintln!("{line}");
    }
    match path {
        Some(p) => {
            let file = File::create(p).with_context(|| format!("creating {}", p.display()))?;
            let mut w = BufWriter::new(file);
            render(report, format, &mut w)?;
            w.flush().with_context(|| format!("writing {}", p.display()))?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            render(report, format, &mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}
