//! Rectangular result tables shared by every study.
//!
//! Column headers carry their unit in brackets, e.g. `tau[1/E]`; the same
//! header string is used as the field name in every encoding so tables can
//! be joined across studies.

use std::fmt;

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Bool(bool),
    Text(String),
}

impl Cell {
    /// Text form used by delimited encodings. Floats use the shortest
    /// representation that round-trips, so every encoding carries the same
    /// value.
    pub fn to_text(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format_float(*v),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

fn format_float(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    let a = v.abs();
    if a != 0.0 && !(1e-4..1e15).contains(&a) {
        format!("{v:e}")
    } else {
        format!("{v:?}")
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
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

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Column {
    pub name: String,
    pub unit: Option<String>,
}

impl Column {
    /// Parses `name[unit]` or a bare `name`.
    pub fn parse(spec: &str) -> Self {
        match spec.split_once('[') {
            Some((name, rest)) => Column { name: name.into(), unit: Some(rest.trim_end_matches(']').into()) },
            None => Column { name: spec.into(), unit: None },
        }
    }

    pub fn header(&self) -> String {
        match &self.unit {
            Some(u) => format!("{}[{u}]", self.name),
            None => self.name.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Cell>>,
    /// Overall verdict of the study that produced the table.
    pub pass: bool,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: &[&str]) -> Self {
        Self { name: name.into(), columns: columns.iter().map(|c| Column::parse(c)).collect(), rows: Vec::new(), pass: true }
    }

    /// Panics if the row width differs from the header; tables are built
    /// by fixed code paths, so a mismatch is a programming error.
    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width mismatch in table {}", self.name);
        self.rows.push(row);
    }

    pub fn headers(&self) -> Vec<String> {
        self.columns.iter().map(Column::header).collect()
    }

    pub fn column_index(&self, header_or_name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == header_or_name || c.header() == header_or_name)
    }

    pub fn column(&self, header_or_name: &str) -> Option<Vec<&Cell>> {
        let i = self.column_index(header_or_name)?;
        Some(self.rows.iter().map(|r| &r[i]).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn headers_carry_units() {
        let t = Table::new("spectrum", &["nu", "tau[1/E]"]);
        assert_eq!(t.headers(), vec!["nu", "tau[1/E]"]);
        assert_eq!(t.column_index("tau"), Some(1));
        assert_eq!(t.column_index("tau[1/E]"), Some(1));
    }

    #[test]
    fn floats_round_trip() {
        for v in [0.0, -2.0 / 3.0, 1e-17, 6.02e23, 0.1 + 0.2, -0.0, 12345.678] {
            let s = Cell::Float(v).to_text();
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), v.to_bits(), "{s}");
        }
    }

    #[test]
    #[should_panic]
    fn ragged_rows_panic() {
        let mut t = Table::new("x", &["a", "b"]);
        t.push(vec![Cell::Int(1)]);
    }
}
