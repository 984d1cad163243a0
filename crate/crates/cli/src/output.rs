//! Tables and artifact emission.

use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Real(f64),
    Bool(bool),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Text(String::new()), Cell::Real)
    }
}

/// 17 significant digits: enough to round-trip any f64.
pub fn real(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        format!("{v}")
    }
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Real(v) => real(*v),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(i) => Value::from(*i),
            Cell::Real(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Text(s) if s.is_empty() => Value::Null,
            Cell::Text(s) => Value::String(s.clone()),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.columns)?;
        for r in &self.rows {
            out.write_record(r.iter().map(Cell::text))?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|r| {
                    let m = self.columns.iter().cloned().zip(r.iter().map(Cell::json)).collect();
                    Value::Object(m)
                })
                .collect(),
        )
    }
}

pub enum Artifact {
    Table(Table),
    Json(Value),
}

/// What a subcommand produced. Without an output directory only `primary`
/// is printed; with one, every artifact is written next to
/// `resolved-config.json` and the summary is printed as one JSON line.
pub struct Outputs {
    pub primary: (String, Artifact),
    pub extra: Vec<(String, Artifact)>,
    pub summary: Value,
}

fn write_artifact<W: Write>(a: &Artifact, format: Format, mut w: W) -> Result<()> {
    match (a, format) {
        (Artifact::Table(t), Format::Csv) => t.write_csv(w),
        (Artifact::Table(t), Format::Json) => {
            serde_json::to_writer_pretty(&mut w, &t.to_json())?;
            writeln!(w)?;
            Ok(())
        }
        (Artifact::Json(v), _) => {
            serde_json::to_writer_pretty(&mut w, v)?;
            writeln!(w)?;
            Ok(())
        }
    }
}

fn file_name(name: &str, a: &Artifact, format: Format) -> String {
    let ext = match (a, format) {
        (Artifact::Table(_), Format::Csv) => "csv",
        _ => "json",
    };
    format!("{name}.{ext}")
}

pub fn emit(out: &Outputs, dir: Option<&Path>, format: Format, resolved: &Value) -> Result<()> {
    let stdout = std::io::stdout();
    let Some(dir) = dir else {
        return write_artifact(&out.primary.1, format, stdout.lock());
    };
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    for (name, a) in std::iter::once(&out.primary).chain(&out.extra) {
        let path = dir.join(file_name(name, a, format));
        let f = std::fs::File::create(&path).with_context(|| format!("writing {}", path.display()))?;
        write_artifact(a, format, std::io::BufWriter::new(f))?;
    }
    let path = dir.join("resolved-config.json");
    let f = std::fs::File::create(&path).with_context(|| format!("writing {}", path.display()))?;
    write_artifact(&Artifact::Json(resolved.clone()), format, f)?;
    let mut lock = stdout.lock();
    serde_json::to_writer(&mut lock, &out.summary)?;
    writeln!(lock)?;
    Ok(())
}
