//! CSV interchange: curve input, selector output, barrier and Aubry exports.
//!
//! All writers use '.' decimals, '\n' line endings and a header row, and
//! format floats with the shortest round-trip representation so identical
//! data produces identical bytes.

use crate::grid::GridField;
use crate::selector::{BranchTable, LagrangianCurve, SelectorError};
use crate::weakkam::BarrierResult;
use std::io::{BufWriter, Write};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("curve file column {0} is not a number: {1}")]
    BadNumber(usize, String),
    #[error("curve file needs columns s,q,p")]
    BadColumns,
    #[error(transparent)]
    Curve(#[from] SelectorError),
}

/// Read a closed curve from CSV with columns s,q,p. A trailing row equal to
/// the first (the closing repeat) is dropped.
pub fn read_curve_csv(path: &Path) -> Result<LagrangianCurve, IoError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)?;
    let mut rows: Vec<(f64, f64)> = Vec::new();
    for record in reader.records() {
        let record = record?;
        if record.len() < 3 {
            return Err(IoError::BadColumns);
        }
        let parse = |i: usize| -> Result<f64, IoError> {
            record[i]
                .parse::<f64>()
                .map_err(|_| IoError::BadNumber(i, record[i].to_string()))
        };
        let _s = parse(0)?;
        rows.push((parse(1)?, parse(2)?));
    }
    if rows.len() >= 2 {
        let first = rows[0];
        let last = *rows.last().unwrap();
        if (first.0 - last.0).abs() < 1e-12 && (first.1 - last.1).abs() < 1e-12 {
            rows.pop();
        }
    }
    Ok(LagrangianCurve::new(rows)?)
}

pub fn write_curve_csv(path: &Path, curve: &LagrangianCurve) -> Result<(), IoError> {
    let mut f = BufWriter::new(std::fs::File::create(path)?);
    writeln!(f, "s,q,p")?;
    let count = curve.len();
    for (j, (q, p)) in curve.samples().iter().enumerate() {
        writeln!(f, "{},{},{}", j as f64 / count as f64, q, p)?;
    }
    Ok(())
}

/// Selector output: node, q, phi, dphi, branch_count.
pub fn write_phi_csv(path: &Path, phi: &GridField, table: &BranchTable) -> Result<(), IoError> {
    let mut f = BufWriter::new(std::fs::File::create(path)?);
    writeln!(f, "node,q,phi,dphi,branch_count")?;
    for i in 0..phi.len() {
        writeln!(
            f,
            "{},{},{},{},{}",
            i,
            table.node_position(i),
            phi.get(i),
            phi.central_diff(i, 0),
            table.branches(i).len()
        )?;
    }
    Ok(())
}

/// Barrier matrix CSV: header row of target nodes, one row per source node.
pub fn write_barrier_csv(path: &Path, barrier: &BarrierResult) -> Result<(), IoError> {
    let n = barrier.grid().node_count();
    let mut f = BufWriter::new(std::fs::File::create(path)?);
    write!(f, "q1\\q2")?;
    for i in 0..n {
        write!(f, ",{i}")?;
    }
    writeln!(f)?;
    for q1 in 0..n {
        write!(f, "{q1}")?;
        for q2 in 0..n {
            write!(f, ",{}", barrier.h_value(q1, q2))?;
        }
        writeln!(f)?;
    }
    Ok(())
}

/// Aubry mask CSV: the indices of masked nodes, one per row.
pub fn write_aubry_csv(path: &Path, mask: &[bool]) -> Result<(), IoError> {
    let mut f = BufWriter::new(std::fs::File::create(path)?);
    writeln!(f, "node")?;
    for (i, &m) in mask.iter().enumerate() {
        if m {
            writeln!(f, "{i}")?;
        }
    }
    Ok(())
}

/// Generic column writer for field-like dumps.
pub fn write_columns_csv(
    path: &Path,
    header: &str,
    rows: impl Iterator<Item = Vec<f64>>,
) -> Result<(), IoError> {
    let mut f = BufWriter::new(std::fs::File::create(path)?);
    writeln!(f, "{header}")?;
    for row in rows {
        let mut first = true;
        for v in row {
            if first {
                write!(f, "{v}")?;
                first = false;
            } else {
                write!(f, ",{v}")?;
            }
        }
        writeln!(f)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn curve_round_trip() {
        let dir = std::env::temp_dir().join("wkam-io-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("curve.csv");
        let curve = fixtures::fold_curve(256);
        write_curve_csv(&path, &curve).unwrap();
        let back = read_curve_csv(&path).unwrap();
        assert_eq!(back.len(), curve.len());
        for (a, b) in back.samples().iter().zip(curve.samples()) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn trailing_repeat_row_is_dropped() {
        let dir = std::env::temp_dir().join("wkam-io-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("closed.csv");
        let mut body = String::from("s,q,p\n");
        let count = 128;
        for j in 0..=count {
            let s = j as f64 / count as f64;
            let q = s % 1.0;
            body.push_str(&format!("{s},{q},0.25\n"));
        }
        std::fs::write(&path, body).unwrap();
        let curve = read_curve_csv(&path).unwrap();
        assert_eq!(curve.len(), count);
    }
}
