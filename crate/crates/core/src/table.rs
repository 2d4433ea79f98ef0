//! Sweep result tables and their file formats.
//!
//! CSV: header cells are `name(unit)`, numbers use Rust's shortest
//! round-trip scientific notation (`{:e}`), lines end with a single `\n`,
//! and the last column is `status(-)` holding `ok` or `failed:<reason>`.
//!
//! Plot data: whitespace-separated `x y` pairs, one block per y series
//! (and per group value when the table has a group column), blocks
//! separated by two blank lines. Failed rows become `#` comment lines.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

pub const STATUS_HEADER: &str = "status(-)";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Column {
    pub name: String,
    pub unit: String,
}

impl Column {
    pub fn new(name: impl Into<String>, unit: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            unit: unit.into(),
        }
    }

    pub fn header(&self) -> String {
        format!("{}({})", self.name, self.unit)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Number(f64),
    Text(String),
    Empty,
}

impl Cell {
    pub fn as_number(&self) -> Option<f64> {
        match self {
            Cell::Number(x) => Some(*x),
            _ => None,
        }
    }

    fn render(&self) -> String {
        match self {
            Cell::Number(x) => format_number(*x),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Number(x)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RowStatus {
    Ok,
    Failed(String),
}

impl RowStatus {
    pub fn is_ok(&self) -> bool {
        matches!(self, RowStatus::Ok)
    }

    fn render(&self) -> String {
        match self {
            RowStatus::Ok => "ok".into(),
            RowStatus::Failed(reason) => format!("failed:{reason}"),
        }
    }

    fn parse(s: &str) -> Result<Self> {
        if s == "ok" {
            Ok(RowStatus::Ok)
        } else if let Some(reason) = s.strip_prefix("failed:") {
            Ok(RowStatus::Failed(reason.to_string()))
        } else {
            Err(Error::invalid(format!("bad status cell `{s}`")))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub cells: Vec<Cell>,
    pub status: RowStatus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    columns: Vec<Column>,
    rows: Vec<Row>,
    /// Column whose values split plot output into separate curves.
    group: Option<usize>,
}

/// Shortest representation that parses back to the same bits.
pub fn format_number(x: f64) -> String {
    format!("{x:e}")
}

impl ResultTable {
    pub fn new(columns: Vec<Column>) -> Result<Self> {
        for c in &columns {
            if c.name.is_empty() || c.unit.is_empty() {
                return Err(Error::invalid("columns need a name and a unit"));
            }
            if c.name.contains(['(', ')', ',', '\n']) || c.unit.contains(['(', ')', ',', '\n']) {
                return Err(Error::invalid(format!("illegal characters in column `{}`", c.header())));
            }
        }
        Ok(Self {
            columns,
            rows: Vec::new(),
            group: None,
        })
    }

    pub fn with_group_column(mut self, name: &str) -> Result<Self> {
        self.group = Some(self.column_index(name)?);
        Ok(self)
    }

    pub fn group_column(&self) -> Option<&Column> {
        self.group.map(|i| &self.columns[i])
    }

    pub fn push(&mut self, cells: Vec<Cell>, status: RowStatus) -> Result<()> {
        if cells.len() != self.columns.len() {
            return Err(Error::invalid(format!(
                "row has {} cells, table has {} columns",
                cells.len(),
                self.columns.len()
            )));
        }
        self.rows.push(Row { cells, status });
        Ok(())
    }

    /// Row of empty cells marked failed.
    pub fn push_failed(&mut self, mut leading: Vec<Cell>, reason: impl Into<String>) -> Result<()> {
        leading.resize(self.columns.len(), Cell::Empty);
        self.push(leading, RowStatus::Failed(reason.into()))
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn all_ok(&self) -> bool {
        self.rows.iter().all(|r| r.status.is_ok())
    }

    pub fn failed_rows(&self) -> usize {
        self.rows.iter().filter(|r| !r.status.is_ok()).count()
    }

    /// Index of the column called `name` (with or without its unit suffix).
    pub fn column_index(&self, name: &str) -> Result<usize> {
        self.columns
            .iter()
            .position(|c| c.name == name || c.header() == name)
            .ok_or_else(|| Error::UnknownColumn(name.to_string()))
    }

    /// Numeric values of a column; `None` where a row has no number.
    pub fn numeric_column(&self, name: &str) -> Result<Vec<Option<f64>>> {
        let i = self.column_index(name)?;
        Ok(self.rows.iter().map(|r| r.cells[i].as_number()).collect())
    }

    pub fn to_csv_string(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let mut header: Vec<String> = self.columns.iter().map(Column::header).collect();
        header.push(STATUS_HEADER.into());
        w.write_record(&header).expect("in-memory write");
        for row in &self.rows {
            let mut rec: Vec<String> = row.cells.iter().map(Cell::render).collect();
            rec.push(row.status.render());
            w.write_record(&rec).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 output")
    }

    pub fn parse_csv(text: &str) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(text.as_bytes());
        let headers = r.headers().map_err(|e| Error::invalid(e.to_string()))?.clone();
        let n = headers.len();
        if n == 0 || &headers[n - 1] != STATUS_HEADER {
            return Err(Error::invalid("last column must be status(-)"));
        }
        let mut columns = Vec::with_capacity(n - 1);
        for h in headers.iter().take(n - 1) {
            let (name, unit) = h
                .strip_suffix(')')
                .and_then(|s| s.rsplit_once('('))
                .ok_or_else(|| Error::invalid(format!("header `{h}` has no unit")))?;
            columns.push(Column::new(name, unit));
        }
        let mut table = ResultTable::new(columns)?;
        for rec in r.records() {
            let rec = rec.map_err(|e| Error::invalid(e.to_string()))?;
            let cells = rec
                .iter()
                .take(n - 1)
                .map(|s| {
                    if s.is_empty() {
                        Cell::Empty
                    } else if let Ok(x) = s.parse::<f64>() {
                        Cell::Number(x)
                    } else {
                        Cell::Text(s.to_string())
                    }
                })
                .collect();
            table.push(cells, RowStatus::parse(&rec[n - 1])?)?;
        }
        Ok(table)
    }

    pub fn to_plotdata_string(&self, x: &str, ys: &[&str]) -> Result<String> {
        let xi = self.column_index(x)?;
        let yi = ys.iter().map(|y| self.column_index(y)).collect::<Result<Vec<_>>>()?;
        for &i in std::iter::once(&xi).chain(&yi) {
            let numeric = self
                .rows
                .iter()
                .filter(|r| r.status.is_ok())
                .all(|r| matches!(r.cells[i], Cell::Number(_)));
            if !numeric {
                return Err(Error::invalid(format!("column `{}` is not numeric", self.columns[i].header())));
            }
        }

        // Group values in order of first appearance.
        let mut groups: Vec<String> = Vec::new();
        let group_of = |r: &Row| self.group.map(|g| r.cells[g].render()).unwrap_or_default();
        for r in &self.rows {
            let g = group_of(r);
            if !groups.contains(&g) {
                groups.push(g);
            }
        }

        let mut out = String::new();
        writeln!(out, "# x: {}", self.columns[xi].header()).unwrap();
        let mut first = true;
        for &y in &yi {
            for g in &groups {
                if !first {
                    out.push_str("\n\n");
                }
                first = false;
                write!(out, "# y: {}", self.columns[y].header()).unwrap();
                if let Some(gc) = self.group {
                    write!(out, " {}={}", self.columns[gc].header(), g).unwrap();
                }
                out.push('\n');
                for (k, r) in self.rows.iter().enumerate() {
                    if group_of(r) != *g {
                        continue;
                    }
                    match &r.status {
                        RowStatus::Ok => {
                            writeln!(out, "{} {}", r.cells[xi].render(), r.cells[y].render()).unwrap();
                        }
                        RowStatus::Failed(reason) => {
                            writeln!(out, "# skipped row {k}: failed:{reason}").unwrap();
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

pub fn emit_csv(table: &ResultTable, path: &Path) -> Result<()> {
    write_file(path, &table.to_csv_string())
}

pub fn emit_plotdata(table: &ResultTable, x: &str, ys: &[&str], path: &Path) -> Result<()> {
    write_file(path, &table.to_plotdata_string(x, ys)?)
}
