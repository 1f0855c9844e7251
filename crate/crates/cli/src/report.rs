//! Report model shared by the CSV and JSON writers.
//!
//! Every number is formatted once by [`Cell`]: CSV uses the shortest
//! round-trip decimal form, JSON uses serde_json's, so both parse back to the
//! same `f64`. Non-finite values are written as `inf`, `-inf` or `nan` in
//! both formats (as strings in JSON).

use std::fmt;
use std::io::{self, Write};

use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Num(f64),
    Text(String),
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

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Int(i64::from(v))
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
        v.map_or(Cell::Text(String::new()), Into::into)
    }
}

fn non_finite(v: f64) -> &'static str {
    if v.is_nan() {
        "nan"
    } else if v > 0.0 {
        "inf"
    } else {
        "-inf"
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Int(v) => write!(f, "{v}"),
            Cell::Num(v) if v.is_finite() => write!(f, "{v:?}"),
            Cell::Num(v) => f.write_str(non_finite(*v)),
            Cell::Text(t) => f.write_str(t),
        }
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Cell::Int(v) => s.serialize_i64(*v),
            Cell::Num(v) if v.is_finite() => s.serialize_f64(*v),
            Cell::Num(v) => s.serialize_str(non_finite(*v)),
            Cell::Text(t) => s.serialize_str(t),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub name: &'static str,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &'static str, header: &[&'static str]) -> Self {
        Self {
            name,
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

struct RowObject<'a>(&'a [&'static str], &'a [Cell]);

impl Serialize for RowObject<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0.iter().zip(self.1) {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

impl Serialize for Table {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(3))?;
        map.serialize_entry("name", self.name)?;
        map.serialize_entry("columns", &self.header)?;
        let rows: Vec<RowObject> = self.rows.iter().map(|r| RowObject(&self.header, r)).collect();
        map.serialize_entry("rows", &rows)?;
        map.end()
    }
}

struct Pairs<'a>(&'a [(String, Cell)]);

impl Serialize for Pairs<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckLine {
    pub name: String,
    pub status: &'static str,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Metadata {
    pub version: &'static str,
    pub flags: serde_json::Value,
    pub sieve_limit: Option<u64>,
    pub precision: String,
    pub wall_time_s: f64,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub metadata: Metadata,
    pub summary: Vec<(String, Cell)>,
    pub checks: Vec<CheckLine>,
    /// None for commands that only produce data.
    pub passed: Option<bool>,
    pub tables: Vec<Table>,
}

impl Report {
    pub fn verdict(&self) -> &'static str {
        match self.passed {
            Some(true) => "PASS",
            Some(false) => "FAIL",
            None => "DONE",
        }
    }

    pub fn summary(&mut self, key: &str, value: impl Into<Cell>) {
        self.summary.push((key.to_string(), value.into()));
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "# etascan {} {}", self.command, self.metadata.version)?;
        writeln!(w, "# flags: {}", self.metadata.flags)?;
        if let Some(limit) = self.metadata.sieve_limit {
            writeln!(w, "# sieve_limit: {limit}")?;
        }
        writeln!(w, "# precision: {}", self.metadata.precision)?;
        writeln!(w, "# wall_time_s: {}", self.metadata.wall_time_s)?;
        for (k, v) in &self.summary {
            writeln!(w, "# {k}: {v}")?;
        }
        for c in &self.checks {
            writeln!(w, "# check {}: {} ({})", c.name, c.status, c.detail)?;
        }
        writeln!(w, "# verdict: {}", self.verdict())?;
        for (i, t) in self.tables.iter().enumerate() {
            if i > 0 {
                writeln!(w, "# table: {}", t.name)?;
            }
            writeln!(w, "{}", t.header.join(","))?;
            for row in &t.rows {
                let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
                writeln!(w, "{}", cells.join(","))?;
            }
        }
        w.flush()
    }

    pub fn write_json<W: Write>(&self, mut w: W) -> io::Result<()> {
        #[derive(Serialize)]
        struct Doc<'a> {
            command: &'a str,
            verdict: &'a str,
            metadata: &'a Metadata,
            summary: Pairs<'a>,
            checks: &'a [CheckLine],
            tables: &'a [Table],
        }
        let doc = Doc {
            command: self.command,
            verdict: self.verdict(),
            metadata: &self.metadata,
            summary: Pairs(&self.summary),
            checks: &self.checks,
            tables: &self.tables,
        };
        serde_json::to_writer_pretty(&mut w, &doc)?;
        writeln!(w)?;
        w.flush()
    }
}
