//! Tab-separated data files and run manifests.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::config::RunConfig;
use crate::error::{Error, Result};

/// Fixed significant-digit rendering used in every data file.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.12e}")
}

/// An in-memory table written in one go.
#[derive(Clone, Debug)]
pub struct Table {
    header: String,
    body: String,
    rows: usize,
}

impl Table {
    /// `header` becomes the single `#` line; usually the column names.
    pub fn new(header: impl Into<String>) -> Self {
        Table {
            header: header.into(),
            body: String::new(),
            rows: 0,
        }
    }

    pub fn with_columns(columns: &[&str]) -> Self {
        Table::new(columns.join("\t"))
    }

    pub fn push(&mut self, fields: &[Field]) {
        let mut first = true;
        for f in fields {
            if !first {
                self.body.push('\t');
            }
            first = false;
            match f {
                Field::Int(i) => {
                    let _ = write!(self.body, "{i}");
                }
                Field::Real(x) => self.body.push_str(&fmt_f64(*x)),
            }
        }
        self.body.push('\n');
        self.rows += 1;
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn render(&self) -> String {
        format!("# {}\n{}", self.header, self.body)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.render()).map_err(|e| Error::io(path, e))
    }
}

#[derive(Clone, Copy, Debug)]
pub enum Field {
    Int(i64),
    Real(f64),
}

impl From<usize> for Field {
    fn from(v: usize) -> Self {
        Field::Int(v as i64)
    }
}

impl From<f64> for Field {
    fn from(v: f64) -> Self {
        Field::Real(v)
    }
}

/// Parameters, provenance and output inventory of one run. Everything but
/// the parameters lives on `#` lines, so the file parses as a config.
#[derive(Clone, Debug, PartialEq)]
pub struct RunManifest {
    pub config: RunConfig,
    pub version: String,
    pub duration_s: f64,
    /// File name and data-row count.
    pub outputs: Vec<(String, usize)>,
    /// Free-form `#` lines, e.g. the initial-condition set.
    pub notes: Vec<String>,
}

pub const MANIFEST_NAME: &str = "manifest.txt";

impl RunManifest {
    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# version = {}", self.version);
        let _ = writeln!(s, "# duration_s = {:.3}", self.duration_s);
        for (name, rows) in &self.outputs {
            let _ = writeln!(s, "# output = {name} rows={rows}");
        }
        for note in &self.notes {
            let _ = writeln!(s, "# {note}");
        }
        s.push_str(&self.config.to_text());
        s
    }

    pub fn write(&self, dir: &Path) -> Result<PathBuf> {
        let path = dir.join(MANIFEST_NAME);
        fs::write(&path, self.render()).map_err(|e| Error::io(&path, e))?;
        Ok(path)
    }

    /// Recovers the configuration echoed in a manifest.
    pub fn read_config(path: &Path) -> Result<RunConfig> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        RunConfig::parse(&text, None, &[])
    }
}
