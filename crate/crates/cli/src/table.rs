//! Deterministic CSV tables. Dialect: comma separator, `.` decimal point,
//! one header row, LF line endings, floats printed with 12 significant
//! digits in scientific notation. Emission is byte-stable: emitting,
//! parsing, and emitting again reproduces the bytes exactly.

use crate::{HarnessError, Result};

/// Formats a float with 12 significant digits. Negative zero is folded
/// into zero so equal values never print differently.
pub fn fmt_float(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.11e}")
}

/// One CSV cell: free text or a float in the fixed 12-digit format.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Text(String),
    Num(f64),
}

impl Cell {
    fn emit(&self) -> String {
        match self {
            // Cells must not collide with the dialect: commas would split,
            // and numeric-looking text would re-parse as Num.
            Cell::Text(s) => {
                debug_assert!(!s.contains([',', '\n']), "text cell breaks the CSV dialect");
                debug_assert!(s.parse::<f64>().is_err(), "numeric-looking text cell");
                s.clone()
            }
            Cell::Num(x) => fmt_float(*x),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Num(n as f64)
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

/// In-memory CSV table with a fixed header.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: AsRef<str>>(header: &[S]) -> Self {
        Table { header: header.iter().map(|s| s.as_ref().to_string()).collect(), rows: Vec::new() }
    }

    /// Appends a row. Arity mismatches are programmer errors.
    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.header.len(), "row arity != header arity");
        self.rows.push(row);
    }

    pub fn header(&self) -> &[String] {
        &self.header
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    /// Numeric value at (row, column), if that cell is numeric.
    pub fn num(&self, row: usize, col: usize) -> Option<f64> {
        match self.rows.get(row)?.get(col)? {
            Cell::Num(x) => Some(*x),
            Cell::Text(_) => None,
        }
    }

    /// Column index for a header name.
    pub fn col(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    /// Serializes the table in the fixed dialect.
    pub fn emit(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(Cell::emit).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    /// Parses text in the fixed dialect. Cells that parse as floats become
    /// numeric; everything else stays text.
    pub fn parse(text: &str) -> Result<Table> {
        let mut lines = text.lines();
        let header: Vec<String> = lines
            .next()
            .ok_or_else(|| HarnessError::Config("empty CSV input".into()))?
            .split(',')
            .map(str::to_string)
            .collect();
        let mut rows = Vec::new();
        for (k, line) in lines.enumerate() {
            let row: Vec<Cell> = line
                .split(',')
                .map(|field| match field.parse::<f64>() {
                    Ok(x) => Cell::Num(x),
                    Err(_) => Cell::Text(field.to_string()),
                })
                .collect();
            if row.len() != header.len() {
                return Err(HarnessError::Config(format!(
                    "CSV row {} has {} fields, header has {}",
                    k + 2,
                    row.len(),
                    header.len()
                )));
            }
            rows.push(row);
        }
        Ok(Table { header, rows })
    }

    /// Writes the table to `path`, or to stdout when no path is given.
    pub fn write(&self, path: Option<&std::path::Path>) -> Result<()> {
        match path {
            Some(p) => std::fs::write(p, self.emit())?,
            None => {
                use std::io::Write as _;
                std::io::stdout().write_all(self.emit().as_bytes())?;
            }
        }
        Ok(())
    }
}
