//! Report model and its text, JSON and CSV renderings.
//!
//! Floats are always printed with 17 significant digits so reports are
//! byte-identical across runs; non-finite values become `null` (JSON) or an
//! empty field (CSV).

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use crate::config::{Format, RunConfig};
use crate::error::CliError;

/// Ordered JSON-like value.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Null,
    Bool(bool),
    Int(u64),
    Num(f64),
    Text(String),
    List(Vec<Cell>),
    Map(Vec<(String, Cell)>),
}

impl Cell {
    pub fn map<K: Into<String>>(entries: impl IntoIterator<Item = (K, Cell)>) -> Cell {
        Cell::Map(entries.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }

    pub fn get(&self, key: &str) -> Option<&Cell> {
        match self {
            Cell::Map(m) => m.iter().find(|(k, _)| k == key).map(|(_, v)| v),
            _ => None,
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            Cell::Num(v) => Some(v),
            Cell::Int(v) => Some(v as f64),
            _ => None,
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match *self {
            Cell::Bool(b) => Some(b),
            _ => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            Cell::Text(s) => Some(s),
            _ => None,
        }
    }

    /// Scalar rendering shared by text and CSV output.
    fn scalar(&self) -> String {
        match self {
            Cell::Null => String::new(),
            Cell::Bool(b) => b.to_string(),
            Cell::Int(i) => i.to_string(),
            Cell::Num(v) => fmt_num(*v).unwrap_or_default(),
            Cell::Text(s) => s.clone(),
            Cell::List(_) | Cell::Map(_) => serde_json::to_string(self).unwrap_or_default(),
        }
    }
}

/// 17 significant digits, e.g. `3.7037037037037035e-2`.
pub fn fmt_num(v: f64) -> Option<String> {
    v.is_finite().then(|| format!("{v:.16e}"))
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Null, Into::into)
    }
}

impl<T: Into<Cell>> From<Vec<T>> for Cell {
    fn from(v: Vec<T>) -> Self {
        Cell::List(v.into_iter().map(Into::into).collect())
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        match self {
            Cell::Null => ser.serialize_none(),
            Cell::Bool(b) => ser.serialize_bool(*b),
            Cell::Int(i) => ser.serialize_u64(*i),
            Cell::Num(v) => match fmt_num(*v) {
                Some(s) => RawValue::from_string(s).map_err(serde::ser::Error::custom)?.serialize(ser),
                None => ser.serialize_none(),
            },
            Cell::Text(s) => ser.serialize_str(s),
            Cell::List(items) => {
                let mut seq = ser.serialize_seq(Some(items.len()))?;
                for it in items {
                    seq.serialize_element(it)?;
                }
                seq.end()
            }
            Cell::Map(entries) => {
                let mut map = ser.serialize_map(Some(entries.len()))?;
                for (k, v) in entries {
                    map.serialize_entry(k, v)?;
                }
                map.end()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: &'static str,
    pub config: Cell,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub summary: Cell,
    /// Exit status 0 when true, 1 otherwise.
    pub pass: bool,
}

impl Report {
    pub fn results(&self) -> Cell {
        Cell::List(
            self.rows.iter().map(|row| Cell::map(self.columns.iter().zip(row).map(|(c, v)| (*c, v.clone())))).collect(),
        )
    }

    /// Value of `column` in every row.
    pub fn column(&self, column: &str) -> Vec<&Cell> {
        match self.columns.iter().position(|c| *c == column) {
            Some(i) => self.rows.iter().map(|r| &r[i]).collect(),
            None => Vec::new(),
        }
    }

    pub fn to_json(&self) -> Result<String, CliError> {
        let doc = Cell::map([
            ("command", Cell::from(self.command)),
            ("config", self.config.clone()),
            ("results", self.results()),
            ("summary", self.summary.clone()),
        ]);
        let mut s = serde_json::to_string_pretty(&doc).map_err(|e| CliError::Emit(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let emit = |e: csv::Error| CliError::Emit(e.to_string());
        w.write_record(&self.columns).map_err(emit)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::scalar)).map_err(emit)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Emit(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Emit(e.to_string()))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.command);
        write_tree(&mut out, &self.summary, 1);
        if !self.rows.is_empty() {
            let _ = writeln!(out, "\nresults ({} rows)", self.rows.len());
            let cells: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(text_cell).collect()).collect();
            let widths: Vec<usize> = (0..self.columns.len())
                .map(|i| cells.iter().map(|r| r[i].len()).chain([self.columns[i].len()]).max().unwrap_or(0))
                .collect();
            let line = |items: Vec<&str>| {
                let padded: Vec<String> = items.iter().zip(&widths).map(|(s, w)| format!("{s:<w$}")).collect();
                padded.join("  ").trim_end().to_string()
            };
            let _ = writeln!(out, "{}", line(self.columns.clone()));
            for r in &cells {
                let _ = writeln!(out, "{}", line(r.iter().map(String::as_str).collect()));
            }
        }
        out
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Text => Ok(self.to_text()),
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
        }
    }
}

fn text_cell(c: &Cell) -> String {
    match c {
        Cell::Num(v) if v.is_finite() => format!("{v:.9e}"),
        Cell::Null => "-".into(),
        other => other.scalar(),
    }
}

fn is_nested(c: &Cell) -> bool {
    match c {
        Cell::Map(_) => true,
        Cell::List(items) => items.iter().any(|i| matches!(i, Cell::Map(_) | Cell::List(_))),
        _ => false,
    }
}

fn tree_scalar(c: &Cell) -> String {
    match c {
        Cell::Null => "-".into(),
        Cell::List(items) => format!("[{}]", items.iter().map(tree_scalar).collect::<Vec<_>>().join(", ")),
        other => other.scalar(),
    }
}

fn write_tree(out: &mut String, cell: &Cell, depth: usize) {
    let pad = "  ".repeat(depth);
    match cell {
        Cell::Map(entries) => {
            for (k, v) in entries {
                match v {
                    v if is_nested(v) => {
                        let _ = writeln!(out, "{pad}{k}:");
                        write_tree(out, v, depth + 1);
                    }
                    _ => {
                        let _ = writeln!(out, "{pad}{k}: {}", tree_scalar(v));
                    }
                }
            }
        }
        Cell::List(items) => {
            for (i, it) in items.iter().enumerate() {
                match it {
                    Cell::Map(_) | Cell::List(_) => {
                        let _ = writeln!(out, "{pad}[{i}]");
                        write_tree(out, it, depth + 1);
                    }
                    _ => {
                        let _ = writeln!(out, "{pad}- {}", tree_scalar(it));
                    }
                }
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{}", tree_scalar(other));
        }
    }
}

/// Echo of the resolved configuration.
pub fn config_cell(cfg: &RunConfig) -> Cell {
    let mut entries: Vec<(String, Cell)> = vec![("command".into(), cfg.command.name().into())];
    if let Some(s) = &cfg.surface {
        entries.push(("surface".into(), s.as_str().into()));
    }
    if !cfg.params.is_empty() {
        entries.push(("params".into(), Cell::map(cfg.params.iter().map(|(k, v)| (k.clone(), Cell::Num(*v))))));
    }
    entries.push(("grid".into(), vec![cfg.grid.0, cfg.grid.1].into()));
    if let Some((x, y)) = cfg.point {
        entries.push(("point".into(), vec![x, y].into()));
    }
    if let Some(m) = &cfg.matrix {
        entries.push(("matrix".into(), m.clone().into()));
    }
    if let Some(p) = &cfg.pair {
        entries.push(("pair".into(), p.as_str().into()));
    }
    entries.push(("tol".into(), cfg.tol.into()));
    entries.push(("format".into(), cfg.format.name().into()));
    if let Some(o) = &cfg.output {
        entries.push(("output".into(), o.display().to_string().into()));
    }
    Cell::Map(entries)
}

/// Write to `path` atomically: a temp file in the same directory, renamed
/// over the target.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let fail = |source| CliError::Output { path: path.to_path_buf(), source };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(fail)?;
    tmp.write_all(contents.as_bytes()).map_err(fail)?;
    tmp.as_file().sync_all().map_err(fail)?;
    tmp.persist(path).map_err(|e| fail(e.error))?;
    Ok(())
}
