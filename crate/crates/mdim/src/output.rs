//! CSV and JSON emission with byte-stable formatting.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::error::{Result, RunError};

/// Significant digits of every CSV number.
pub const SIG_DIGITS: usize = 12;

/// `x` with [`SIG_DIGITS`] significant digits, trailing zeros trimmed;
/// scientific notation outside `[1e-5, 1e12)`.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    // Rounding first fixes the exponent, e.g. 9.9999999999999 → 1e1.
    let sci = format!("{:.*e}", SIG_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..SIG_DIGITS as i32).contains(&exp) {
        let decimals = (SIG_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        format!("{}e{}", trim_zeros(mantissa.to_string()), exp)
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unit {
    Nats,
    Dimensionless,
    /// Labels and flags.
    Text,
}

impl Unit {
    fn label(self, bits: bool) -> &'static str {
        match self {
            Unit::Nats if bits => "bits",
            Unit::Nats => "nats",
            Unit::Dimensionless => "dimensionless",
            Unit::Text => "text",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i128),
    Text(String),
    Bool(bool),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Num)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i128)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i128)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v as i128)
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

/// A CSV file whose first line declares the unit of every column.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<(String, Unit)>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[(&str, Unit)]) -> Self {
        Self {
            columns: columns.iter().map(|(c, u)| (c.to_string(), *u)).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// With `bits`, nats columns are divided by `ln 2` and a `_nats`
    /// suffix in their name becomes `_bits`.
    pub fn to_bytes(&self, bits: bool) -> Result<Vec<u8>> {
        let mut out = Vec::new();
        let units: Vec<String> = self
            .columns
            .iter()
            .map(|(c, u)| format!("{}={}", rename(c, *u, bits), u.label(bits)))
            .collect();
        writeln!(out, "# units: {}", units.join(", ")).expect("write to Vec");
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        let to_csv = |e: csv::Error| RunError::Task(format!("csv: {e}"));
        w.write_record(self.columns.iter().map(|(c, u)| rename(c, *u, bits)))
            .map_err(to_csv)?;
        for row in &self.rows {
            let cells = row.iter().zip(&self.columns).map(|(cell, (_, unit))| match cell {
                Cell::Num(v) if bits && *unit == Unit::Nats => fmt_num(v / std::f64::consts::LN_2),
                Cell::Num(v) => fmt_num(*v),
                Cell::Int(v) => v.to_string(),
                Cell::Text(s) => s.clone(),
                Cell::Bool(b) => b.to_string(),
                Cell::Empty => String::new(),
            });
            w.write_record(cells).map_err(to_csv)?;
        }
        w.into_inner().map_err(|e| RunError::Task(format!("csv: {e}")))
    }
}

fn rename(name: &str, unit: Unit, bits: bool) -> String {
    match name.strip_suffix("_nats") {
        Some(base) if bits && unit == Unit::Nats => format!("{base}_bits"),
        _ => name.to_string(),
    }
}

/// Pretty JSON with a trailing newline.
pub fn json_bytes<T: Serialize + ?Sized>(value: &T) -> Result<Vec<u8>> {
    let mut v = serde_json::to_vec_pretty(value).map_err(|e| RunError::Task(format!("json: {e}")))?;
    v.push(b'\n');
    Ok(v)
}

/// Writes through a temporary file in the same directory and renames it
/// into place, so readers never see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().unwrap_or(Path::new("."));
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.tmp"));
    let io = |e| RunError::io(path, e);
    {
        let mut f = std::fs::File::create(&tmp).map_err(io)?;
        f.write_all(bytes).map_err(io)?;
        f.sync_all().map_err(io)?;
    }
    std::fs::rename(&tmp, path).map_err(io)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(fmt_num(0.0), "0");
        assert_eq!(fmt_num(3.0), "3");
        assert_eq!(fmt_num(-0.25), "-0.25");
        assert_eq!(fmt_num(std::f64::consts::LN_2), "0.69314718056");
        assert_eq!(fmt_num(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_num(123456.789), "123456.789");
        assert_eq!(fmt_num(9.9999999999999), "10");
        assert_eq!(fmt_num(1e-7), "1e-7");
        assert_eq!(fmt_num(2.5e15), "2.5e15");
        assert_eq!(fmt_num(0.00012345678901234), "0.000123456789012");
        assert_eq!(fmt_num(f64::INFINITY), "inf");
    }

    #[test]
    fn table_bytes() {
        let mut t = Table::new(&[("epsilon", Unit::Dimensionless), ("rate_nats", Unit::Nats), ("name", Unit::Text)]);
        t.push(vec![0.5.into(), std::f64::consts::LN_2.into(), "a,b".into()]);
        t.push(vec![0.25.into(), Cell::Empty, "c".into()]);
        let s = String::from_utf8(t.to_bytes(false).unwrap()).unwrap();
        assert_eq!(
            s,
            "# units: epsilon=dimensionless, rate_nats=nats, name=text\nepsilon,rate_nats,name\n0.5,0.69314718056,\"a,b\"\n0.25,,c\n"
        );
        let s = String::from_utf8(t.to_bytes(true).unwrap()).unwrap();
        assert!(s.starts_with("# units: epsilon=dimensionless, rate_bits=bits"));
        assert!(s.contains("\n0.5,1,"));
    }
}
