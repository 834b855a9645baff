//! Report and table emission. Everything is rendered in memory first and
//! then written through temporary files, so a failed run leaves nothing.

use std::io::Write;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Int(i64),
    Num(f64),
}

impl Cell {
    /// Numbers use the shortest representation that round-trips.
    fn render(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Int(v) => v.to_string(),
            Cell::Num(v) => format!("{v}"),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Text(s) => json!(s),
            Cell::Int(v) => json!(v),
            Cell::Num(v) if v.is_finite() => json!(v),
            Cell::Num(v) => json!(v.to_string()),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Table { name: name.to_string(), header: header.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))?;
        }
        Ok(String::from_utf8(w.into_inner().context("flushing CSV")?)?)
    }

    fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Object(self.header.iter().cloned().zip(r.iter().map(Cell::to_json)).collect()))
            .collect();
        Value::Array(rows)
    }
}

#[derive(Debug, Default)]
pub struct Artifacts {
    pub report: Map<String, Value>,
    pub tables: Vec<Table>,
}

impl Artifacts {
    pub fn set(&mut self, key: &str, value: impl Serialize) {
        self.report.insert(key.to_string(), serde_json::to_value(value).expect("serializable report value"));
    }
}

#[derive(Debug, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub format: Format,
    pub seed: u64,
    pub args: Value,
}

fn meta(config: &RunConfig) -> Value {
    let stamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    json!({
        "tool": "grafield",
        "version": env!("CARGO_PKG_VERSION"),
        "config": config,
        "timestamp": stamp,
    })
}

/// Temporary file in `dir` holding `bytes`, ready to be renamed into place.
pub fn stage(dir: &Path, bytes: &[u8]) -> Result<tempfile::NamedTempFile> {
    let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("creating a file in {}", dir.display()))?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    Ok(tmp)
}

/// Writes the report and tables.
///
/// With `out`: `<command>.json` (report with meta) plus one `<table>.csv`
/// per table under CSV format; JSON format embeds the tables in the report.
/// Without `out`: CSV format prints the first table, JSON prints the report.
pub fn emit(config: &RunConfig, artifacts: Artifacts, out: Option<&Path>) -> Result<()> {
    let mut report = artifacts.report;
    if config.format == Format::Json || out.is_none() {
        for t in &artifacts.tables {
            report.insert(t.name.clone(), t.to_json());
        }
    }
    report.insert("meta".into(), meta(config));
    let report_text = serde_json::to_string_pretty(&Value::Object(report))? + "\n";

    let Some(dir) = out else {
        let stdout = std::io::stdout();
        let mut lock = stdout.lock();
        match (config.format, artifacts.tables.first()) {
            (Format::Csv, Some(t)) => lock.write_all(t.to_csv()?.as_bytes())?,
            _ => lock.write_all(report_text.as_bytes())?,
        }
        return Ok(());
    };

    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut pending = vec![(format!("{}.json", config.command), report_text.into_bytes())];
    if config.format == Format::Csv {
        for t in &artifacts.tables {
            pending.push((format!("{}.csv", t.name), t.to_csv()?.into_bytes()));
        }
    }
    // Stage everything before the first rename.
    let mut staged = Vec::new();
    for (name, bytes) in &pending {
        staged.push((name, stage(dir, bytes)?));
    }
    for (name, tmp) in staged {
        let target = dir.join(name);
        tmp.persist(&target).with_context(|| format!("writing {}", target.display()))?;
    }
    Ok(())
}
