use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::error::CliError;

pub const DELIMITER: char = ',';

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Number(f64),
    Integer(i64),
    Text(String),
    Flag(bool),
    Missing,
}

impl Cell {
    fn render(&self, out: &mut String) {
        match self {
            Cell::Number(v) if v.is_finite() => write!(out, "{v:.8e}").unwrap(),
            Cell::Number(v) => write!(out, "{v}").unwrap(),
            Cell::Integer(v) => write!(out, "{v}").unwrap(),
            Cell::Text(s) => out.push_str(s),
            Cell::Flag(b) => out.push_str(if *b { "true" } else { "false" }),
            Cell::Missing => out.push_str("NA"),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Number(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Missing, Cell::Number)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub command: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl ResultTable {
    pub fn new(command: &'static str, columns: &[&'static str]) -> Self {
        Self { command, columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Comment block, column header, then one line per row.
    pub fn render(&self, config_hash: &str) -> String {
        let mut out = String::new();
        writeln!(out, "# wqed {} {}", env!("CARGO_PKG_VERSION"), self.command).unwrap();
        writeln!(out, "# config-sha256 {config_hash}").unwrap();
        out.push_str(&self.columns.join(&DELIMITER.to_string()));
        out.push('\n');
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate() {
                if i > 0 {
                    out.push(DELIMITER);
                }
                cell.render(&mut out);
            }
            out.push('\n');
        }
        out
    }

    /// Index of `column`, if present.
    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| *c == name)
    }
}

pub fn config_hash(source: &str) -> String {
    Sha256::digest(source.as_bytes()).iter().fold(String::with_capacity(64), |mut s, b| {
        write!(s, "{b:02x}").unwrap();
        s
    })
}

pub fn emit_plot_data(table: &ResultTable, config_hash: &str, path: &Path) -> Result<(), CliError> {
    fs::write(path, table.render(config_hash)).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_carry_nine_significant_digits() {
        let mut t = ResultTable::new("spectrum", &["x", "y"]);
        t.push(vec![Cell::Number(-0.16245984811645), Cell::Missing]);
        t.push(vec![Cell::Number(0.0), Cell::Flag(true)]);
        let text = t.render("abc");
        let body: Vec<&str> = text.lines().skip(3).collect();
        assert_eq!(body, ["-1.62459848e-1,NA", "0.00000000e0,true"]);
    }

    #[test]
    fn empty_table_is_header_only() {
        let t = ResultTable::new("sense", &["shift", "dd"]);
        let text = t.render("abc");
        assert_eq!(text.lines().last(), Some("shift,dd"));
        assert_eq!(text.lines().count(), 3);
    }

    #[test]
    fn hash_is_hex_sha256() {
        assert_eq!(config_hash(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    }
}
