use std::fmt::Display;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde_json::Value;

use crate::scenario::Format;

/// A CSV table with string cells.
#[derive(Debug, Clone)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| escape(c)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

fn escape(cell: &str) -> String {
    if cell.contains([',', '"', '\n']) {
        format!("\"{}\"", cell.replace('"', "\"\""))
    } else {
        cell.to_string()
    }
}

pub fn cell(x: impl Display) -> String {
    x.to_string()
}

/// Shortest round-trip form, switching to exponent notation far from unity.
pub fn num(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || (1e-4..1e16).contains(&a) || !a.is_finite() {
        x.to_string()
    } else {
        format!("{x:e}")
    }
}

/// Everything a command emits.
pub struct Output {
    pub main: Table,
    /// Extra tables, written next to `--out` as `<stem>.<name>.csv`.
    pub sections: Vec<(&'static str, Table)>,
    pub json: Value,
    /// Some tolerance check failed.
    pub failed: bool,
}

fn sidecar(out: &Path, name: &str) -> PathBuf {
    let stem = out.file_stem().map_or_else(|| "out".into(), |s| s.to_string_lossy().into_owned());
    out.with_file_name(format!("{stem}.{name}.csv"))
}

pub fn emit(output: &Output, format: Format, out: Option<&Path>) -> Result<()> {
    match (format, out) {
        (Format::Json, None) => stdout(&(serde_json::to_string_pretty(&output.json)? + "\n"))?,
        (Format::Json, Some(p)) => write(p, &(serde_json::to_string_pretty(&output.json)? + "\n"))?,
        (Format::Csv, None) => {
            let mut text = output.main.to_csv();
            for (name, table) in &output.sections {
                text += &format!("\n# {name}\n{}", table.to_csv());
            }
            stdout(&text)?;
        }
        (Format::Csv, Some(p)) => {
            write(p, &output.main.to_csv())?;
            for (name, table) in &output.sections {
                write(&sidecar(p, name), &table.to_csv())?;
            }
        }
    }
    Ok(())
}

fn stdout(text: &str) -> Result<()> {
    let mut lock = std::io::stdout().lock();
    match lock.write_all(text.as_bytes()).and_then(|()| lock.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}
