//! Dense matrices as CSV: one row per line, comma-separated decimals.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Parses a matrix. Blank lines are skipped; every row must have the same
/// number of finite entries.
pub fn parse_matrix_csv(text: &str) -> Result<DMatrix<f64>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut data = Vec::new();
    let mut cols: Option<usize> = None;
    let mut rows = 0usize;
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Error::Parse(format!("matrix csv: {e}")))?;
        if rec.iter().all(|f| f.is_empty()) {
            continue;
        }
        match cols {
            None => cols = Some(rec.len()),
            Some(c) if c != rec.len() => {
                return Err(Error::Parse(format!(
                    "matrix csv: row {} has {} entries, expected {c}",
                    line + 1,
                    rec.len()
                )))
            }
            _ => {}
        }
        for f in rec.iter() {
            data.push(parse_finite(f).map_err(|e| Error::Parse(format!("matrix csv row {}: {e}", line + 1)))?);
        }
        rows += 1;
    }
    let cols = cols.unwrap_or(0);
    Ok(DMatrix::from_row_slice(rows, cols, &data))
}

pub(crate) fn parse_finite(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

pub fn write_matrix_csv(m: &DMatrix<f64>) -> String {
    let mut out = String::new();
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|j| m[(i, j)].to_string()).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}
