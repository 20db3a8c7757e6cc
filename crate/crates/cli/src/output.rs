//! CSV emission and parsing.
//!
//! Numbers are written like C's `%.12g`: twelve significant digits, no
//! trailing zeros, exponent form outside `[1e-4, 1e12)`.

use std::io::{Read, Write};
use std::path::Path;

use fracwin::analysis::ComparisonReport;
use fracwin::Trajectory;

use crate::error::CliError;

pub fn fmt_g12(v: f64) -> String {
    if v == 0.0 {
        return if v.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !v.is_finite() {
        return if v.is_nan() { "nan".into() } else if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{v:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..12).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{mantissa}e{sign}{:02}", exp.abs());
    }
    let decimals = (11 - exp).max(0) as usize;
    trim_zeros(&format!("{v:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// CSV writer with `\n` row terminators.
pub fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w)
}

/// `t,x1,...,xn`, one row per stored node.
pub fn write_trajectory<W: Write>(traj: &Trajectory, w: W) -> Result<(), CliError> {
    let mut out = csv_writer(w);
    let mut header = vec!["t".to_string()];
    header.extend((1..=traj.dim()).map(|i| format!("x{i}")));
    out.write_record(&header)?;
    let grid = traj.grid();
    for (j, state) in traj.states().enumerate() {
        let mut row = vec![fmt_g12(grid.node(j))];
        row.extend(state.iter().map(|v| fmt_g12(*v)));
        out.write_record(&row)?;
    }
    out.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// `t,x,y,violation` with `violation = x - y`.
pub fn write_comparison<W: Write>(report: &ComparisonReport, w: W) -> Result<(), CliError> {
    let mut out = csv_writer(w);
    out.write_record(["t", "x", "y", "violation"])?;
    for (j, (x, y)) in report.lhs.iter().zip(&report.rhs).enumerate() {
        out.write_record([fmt_g12(report.grid.node(j)), fmt_g12(*x), fmt_g12(*y), fmt_g12(x - y)])?;
    }
    out.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Writes through a closure into `path`, creating parent directories.
pub fn write_file(
    path: &Path,
    body: impl FnOnce(&mut Vec<u8>) -> Result<(), CliError>,
) -> Result<(), CliError> {
    let mut buf = Vec::new();
    body(&mut buf)?;
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    std::fs::write(path, buf).map_err(|e| CliError::io(path, e))
}

/// A numeric CSV table with a header row.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }
}

pub fn read_table<R: Read>(r: R) -> Result<Table, CliError> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(r);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    let mut rows = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let row = rec
            .iter()
            .map(|field| {
                field.parse::<f64>().map_err(|_| {
                    CliError::Config(format!("csv row {}: '{field}' is not a number", line + 2))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    Ok(Table { header, rows })
}
