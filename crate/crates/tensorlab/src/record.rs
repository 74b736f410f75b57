//! Flat records and their CSV encoding.
//!
//! Floats are written with 17 significant digits (`{:.16e}`), missing values as
//! `n/a`. Every record of one table carries the same columns in the same order.

use std::cmp::Ordering;
use std::io::Write;

use crate::error::RunError;

pub const MISSING: &str = "n/a";

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Missing,
}

impl Cell {
    pub fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format!("{v:.16e}"),
            Cell::Text(s) => s.clone(),
            Cell::Missing => MISSING.to_string(),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            Cell::Int(v) => Some(v as f64),
            Cell::Float(v) => Some(v),
            _ => None,
        }
    }

    fn rank(&self) -> u8 {
        match self {
            Cell::Int(_) | Cell::Float(_) => 0,
            Cell::Text(_) => 1,
            Cell::Missing => 2,
        }
    }

    fn total_cmp(&self, other: &Cell) -> Ordering {
        match (self, other) {
            (Cell::Int(a), Cell::Int(b)) => a.cmp(b),
            (Cell::Text(a), Cell::Text(b)) => a.cmp(b),
            _ => match (self.as_f64(), other.as_f64()) {
                (Some(a), Some(b)) => a.total_cmp(&b),
                _ => self.rank().cmp(&other.rank()),
            },
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Text(if v { "true" } else { "false" }.to_string())
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Missing, Into::into)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Record {
    cells: Vec<(&'static str, Cell)>,
}

impl Record {
    pub fn new() -> Self {
        Record::default()
    }

    pub fn with(mut self, name: &'static str, value: impl Into<Cell>) -> Self {
        self.cells.push((name, value.into()));
        self
    }

    pub fn get(&self, name: &str) -> Option<&Cell> {
        self.cells.iter().find(|(n, _)| *n == name).map(|(_, c)| c)
    }

    pub fn columns(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.cells.iter().map(|(n, _)| *n)
    }

    pub fn values(&self) -> impl Iterator<Item = &Cell> {
        self.cells.iter().map(|(_, c)| c)
    }

    pub fn is_finite(&self) -> bool {
        self.values().all(|c| !matches!(c, Cell::Float(v) if !v.is_finite()))
    }
}

/// Sorts by the named key columns, in order; ties keep their relative order.
pub fn sort_records(records: &mut [Record], keys: &[&str]) {
    records.sort_by(|a, b| {
        for k in keys {
            let ord = match (a.get(k), b.get(k)) {
                (Some(x), Some(y)) => x.total_cmp(y),
                (x, y) => x.is_some().cmp(&y.is_some()),
            };
            if ord != Ordering::Equal {
                return ord;
            }
        }
        Ordering::Equal
    });
}

pub fn write_csv<W: Write>(records: &[Record], out: W) -> Result<(), RunError> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(out);
    if let Some(first) = records.first() {
        let header: Vec<&str> = first.columns().collect();
        w.write_record(&header)?;
        for r in records {
            let cols: Vec<&str> = r.columns().collect();
            assert_eq!(cols, header, "records in one table must share their columns");
            w.write_record(r.values().map(Cell::render))?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn to_csv_string(records: &[Record]) -> Result<String, RunError> {
    let mut buf = Vec::new();
    write_csv(records, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}
