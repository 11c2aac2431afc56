use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Serialize;
use tempfile::NamedTempFile;

use crate::config::Format;

/// Write `bytes` to `dir/name` through a temporary file in the same directory.
pub fn write_atomic(dir: &Path, name: &str, bytes: &[u8]) -> anyhow::Result<PathBuf> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let target = dir.join(name);
    let mut tmp =
        NamedTempFile::new_in(dir).with_context(|| format!("temp file in {}", dir.display()))?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(&target)
        .with_context(|| format!("writing {}", target.display()))?;
    Ok(target)
}

pub fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> anyhow::Result<PathBuf> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_atomic(dir, name, text.as_bytes())
}

/// Numeric table. Floats use Rust's shortest round-trip formatting, which is
/// locale independent; non-finite values are written as `NaN`, `inf`, `-inf`.
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Serialize)]
struct JsonTable<'a> {
    columns: &'a [String],
    rows: Vec<Vec<Option<f64>>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> anyhow::Result<Vec<u8>> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|v| v.to_string()))?;
        }
        Ok(w.into_inner()?)
    }

    /// `{"columns": [...], "rows": [[...], ...]}` with non-finite values as null.
    pub fn to_json(&self) -> anyhow::Result<Vec<u8>> {
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(|v| v.is_finite().then_some(*v)).collect())
            .collect();
        let mut text = serde_json::to_string(&JsonTable {
            columns: &self.columns,
            rows,
        })?;
        text.push('\n');
        Ok(text.into_bytes())
    }

    /// Write as `stem.csv` or `stem.json`.
    pub fn write(&self, dir: &Path, stem: &str, format: Format) -> anyhow::Result<PathBuf> {
        match format {
            Format::Csv => write_atomic(dir, &format!("{stem}.csv"), &self.to_csv()?),
            Format::Json => write_atomic(dir, &format!("{stem}.json"), &self.to_json()?),
        }
    }
}
