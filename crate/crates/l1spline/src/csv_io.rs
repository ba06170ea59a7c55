//! Two-column CSV datasets and multi-column curve samples.
//!
//! Numbers are written with 17 significant digits, which round-trips every
//! finite double. A first line that does not parse as two numbers is taken
//! as a header.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use l1spline_core::DataSet;

use crate::{Error, Result};

/// Round-trip representation of a double.
pub fn format_number(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn read_csv(path: &Path) -> Result<DataSet> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_csv(file, path)
}

/// Parses dataset CSV from any reader; `path` only labels errors.
pub fn parse_csv<R: Read>(reader: R, path: &Path) -> Result<DataSet> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut points = Vec::new();
    for (k, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| Error::Parse {
            path: path.into(),
            line: e.position().map_or(0, |p| p.line()),
            msg: e.to_string(),
        })?;
        let line = record.position().map_or(k as u64 + 1, |p| p.line());
        if record.iter().all(str::is_empty) {
            continue;
        }
        let bad = |msg: String| Error::Parse {
            path: path.into(),
            line,
            msg,
        };
        if record.len() != 2 {
            return Err(bad(format!("expected 2 columns, found {}", record.len())));
        }
        let parsed = (record[0].parse::<f64>(), record[1].parse::<f64>());
        match parsed {
            (Ok(x), Ok(y)) if x.is_finite() && y.is_finite() => points.push((x, y)),
            (Ok(_), Ok(_)) => return Err(bad("values must be finite".into())),
            _ if k == 0 => continue,
            _ => return Err(bad(format!("cannot parse {:?} as two numbers", record.as_slice()))),
        }
    }
    Ok(DataSet::from_points(points)?)
}

pub fn write_csv(d: &DataSet, path: &Path) -> Result<()> {
    let columns = [d.x().to_vec(), d.y().to_vec()];
    write_columns(path, &["x", "y"], &columns)
}

/// Writes equal-length columns under a header.
pub fn write_columns(path: &Path, header: &[&str], columns: &[Vec<f64>]) -> Result<()> {
    let io = |e: std::io::Error| Error::io(path, e);
    let file = File::create(path).map_err(io)?;
    let mut w = csv::Writer::from_writer(file);
    let csv_err = |e: csv::Error| match e.into_kind() {
        csv::ErrorKind::Io(e) => io(e),
        other => io(std::io::Error::other(format!("{other:?}"))),
    };
    w.write_record(header).map_err(csv_err)?;
    let rows = columns.first().map_or(0, Vec::len);
    for r in 0..rows {
        w.write_record(columns.iter().map(|c| format_number(c[r]))).map_err(csv_err)?;
    }
    let mut file = w.into_inner().map_err(|e| io(e.into_error()))?;
    file.flush().map_err(io)
}
