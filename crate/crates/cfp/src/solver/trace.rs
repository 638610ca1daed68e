//! Per-iteration records and their CSV form.
//!
//! Columns: `k, f_val, step_norm, relax, S_k, proximity`. `S_k` is the
//! cumulative path length `sum_{l <= k} ||x^l - x^{l+1}||`; the proximity
//! field is empty when it was not recorded.

use std::io::{Read, Write};

use crate::error::{CfpError, Result};
use crate::function::Vector;

pub const CSV_HEADER: [&str; 6] = ["k", "f_val", "step_norm", "relax", "S_k", "proximity"];

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub k: usize,
    pub x: Vector,
    /// `f(x^k)`
    pub f_val: f64,
    /// `||x^{k+1} - x^k||`, zero on the terminal row.
    pub step_norm: f64,
    /// Relaxation actually applied (`alpha`, `sigma_k` or `lambda_k`).
    pub relax: f64,
    pub s_k: f64,
    pub proximity: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct IterateTrace {
    rows: Vec<TraceRow>,
}

impl IterateTrace {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a row, deriving `S_k` from the previous row and `step_norm`.
    pub fn push(&mut self, k: usize, x: Vector, f_val: f64, step_norm: f64, relax: f64, proximity: Option<f64>) {
        let prev = self.rows.last().map_or(0.0, |r| r.s_k);
        self.rows.push(TraceRow {
            k,
            x,
            f_val,
            step_norm,
            relax,
            s_k: prev + step_norm,
            proximity,
        });
    }

    pub fn rows(&self) -> &[TraceRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn last(&self) -> Option<&TraceRow> {
        self.rows.last()
    }

    pub fn f_values(&self) -> impl Iterator<Item = f64> + '_ {
        self.rows.iter().map(|r| r.f_val)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| CfpError::Io(e.to_string());
        w.write_record(CSV_HEADER).map_err(io)?;
        for r in &self.rows {
            let prox = r.proximity.map(|p| p.to_string()).unwrap_or_default();
            w.write_record([
                r.k.to_string(),
                r.f_val.to_string(),
                r.step_norm.to_string(),
                r.relax.to_string(),
                r.s_k.to_string(),
                prox,
            ])
            .map_err(io)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory cannot fail");
        String::from_utf8(buf).expect("csv output is utf-8")
    }
}

/// One parsed CSV row; iterates are not stored in the CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub k: usize,
    pub f_val: f64,
    pub step_norm: f64,
    pub relax: f64,
    pub s_k: f64,
    pub proximity: Option<f64>,
}

/// Parses a trace CSV, reporting the line and column of the first bad cell.
pub fn read_csv<R: Read>(input: R) -> Result<Vec<CsvRow>> {
    let mut reader = csv::Reader::from_reader(input);
    let header = reader
        .headers()
        .map_err(|e| CfpError::Io(e.to_string()))?
        .clone();
    if header.iter().collect::<Vec<_>>() != CSV_HEADER {
        return Err(CfpError::Schema {
            field: "header".into(),
            message: format!("expected {}", CSV_HEADER.join(",")),
        });
    }
    let mut rows = Vec::new();
    for (idx, record) in reader.records().enumerate() {
        let line = idx + 2;
        let record = record.map_err(|e| CfpError::Io(e.to_string()))?;
        let cell = |col: usize| -> Result<f64> {
            let raw = record.get(col).unwrap_or("");
            raw.trim().parse::<f64>().map_err(|_| CfpError::Schema {
                field: format!("line {line}, column {}", CSV_HEADER[col]),
                message: format!("non-numeric value {raw:?}"),
            })
        };
        let k = record
            .get(0)
            .unwrap_or("")
            .trim()
            .parse::<usize>()
            .map_err(|_| CfpError::Schema {
                field: format!("line {line}, column k"),
                message: "expected a non-negative integer".into(),
            })?;
        let proximity = match record.get(5).map(str::trim) {
            None | Some("") => None,
            Some(_) => Some(cell(5)?),
        };
        rows.push(CsvRow {
            k,
            f_val: cell(1)?,
            step_norm: cell(2)?,
            relax: cell(3)?,
            s_k: cell(4)?,
            proximity,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cumulative_path_length() {
        let mut t = IterateTrace::new();
        t.push(0, Vector::zeros(1), 3.0, 0.5, 1.0, None);
        t.push(1, Vector::zeros(1), 2.0, 0.25, 1.0, Some(0.1));
        t.push(2, Vector::zeros(1), 1.0, 0.0, 0.0, None);
        let s: Vec<f64> = t.rows().iter().map(|r| r.s_k).collect();
        assert_eq!(s, vec![0.5, 0.75, 0.75]);
    }

    #[test]
    fn csv_round_trip_preserves_values() {
        let mut t = IterateTrace::new();
        t.push(0, Vector::zeros(1), 0.1 + 0.2, 1.0 / 3.0, 1.98, None);
        t.push(1, Vector::zeros(1), 1e-300, 0.0, 0.0, Some(2.5e-17));
        let text = t.to_csv_string();
        assert!(text.starts_with("k,f_val,step_norm,relax,S_k,proximity\n"));
        assert!(text.lines().nth(1).unwrap().ends_with(','));
        let rows = read_csv(text.as_bytes()).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].f_val, 0.1 + 0.2);
        assert_eq!(rows[0].step_norm, 1.0 / 3.0);
        assert_eq!(rows[1].proximity, Some(2.5e-17));
        assert_eq!(rows[0].proximity, None);
    }

    #[test]
    fn csv_rejects_bad_cells() {
        let text = "k,f_val,step_norm,relax,S_k,proximity\n0,abc,0,0,0,\n";
        match read_csv(text.as_bytes()) {
            Err(CfpError::Schema { field, .. }) => assert!(field.contains("line 2")),
            other => panic!("unexpected {other:?}"),
        }
        assert!(read_csv("a,b\n1,2\n".as_bytes()).is_err());
    }
}
