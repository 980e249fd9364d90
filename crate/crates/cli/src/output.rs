//! CSV tables and JSON manifests.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde_json::Value as Json;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    F(f64),
    I(i64),
    S(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::F(v)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::I(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::I(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::S(v.to_string())
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::S(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::S(v)
    }
}

/// 17 significant digits, enough to round-trip any f64.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Column-major JSON object: header name to the list of its values.
    pub fn to_json_columns(&self) -> Json {
        let mut map = serde_json::Map::new();
        for (j, name) in self.header.iter().enumerate() {
            let col = self
                .rows
                .iter()
                .map(|r| match &r[j] {
                    Cell::F(v) => Json::from(*v),
                    Cell::I(v) => Json::from(*v),
                    Cell::S(v) => Json::from(v.as_str()),
                })
                .collect();
            map.insert(name.clone(), Json::Array(col));
        }
        Json::Object(map)
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let mut first = true;
            for cell in row {
                if !first {
                    out.push(',');
                }
                first = false;
                match cell {
                    Cell::F(v) => out.push_str(&fmt_f64(*v)),
                    Cell::I(v) => {
                        let _ = write!(out, "{v}");
                    }
                    Cell::S(s) if s.contains([',', '"', '\n']) => {
                        let _ = write!(out, "\"{}\"", s.replace('"', "\"\""));
                    }
                    Cell::S(s) => out.push_str(s),
                }
            }
            out.push('\n');
        }
        out
    }
}

/// Pretty JSON; `serde_json` maps keep keys sorted.
pub fn to_pretty_json(v: &Json) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

pub fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))
}

/// `<outdir>/<subcommand>-<stamp>` without extension.
pub fn output_stem(outdir: &Path, subcommand: &str, stamp: &str) -> PathBuf {
    outdir.join(format!("{subcommand}-{stamp}"))
}

pub fn with_ext(stem: &Path, ext: &str) -> PathBuf {
    let mut s = stem.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}
