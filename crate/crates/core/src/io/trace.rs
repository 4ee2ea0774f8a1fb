//! Trace CSV (`iter,step_norm,dual_gap_norm,kkt_residual,lyapunov,wall_ms`)
//! and the snapshot sidecar (`iter,block,values…`, one vector per row).

use nalgebra::DVector;

use crate::certify::trace::{IterRecord, Snapshot};
use crate::error::{Error, Result};

use super::matrix::parse_finite;

pub const TRACE_HEADER: [&str; 6] = ["iter", "step_norm", "dual_gap_norm", "kkt_residual", "lyapunov", "wall_ms"];

pub fn write_trace_csv(records: &[IterRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(TRACE_HEADER).map_err(csv_err)?;
    for r in records {
        w.write_record([
            r.k.to_string(),
            r.step_norm.to_string(),
            r.dual_gap_norm.to_string(),
            r.kkt_residual.to_string(),
            r.lyapunov.map_or(String::new(), |l| l.to_string()),
            r.wall_ms.to_string(),
        ])
        .map_err(csv_err)?;
    }
    finish(w)
}

fn csv_err(e: csv::Error) -> Error {
    Error::Parse(format!("csv: {e}"))
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Parse(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::Parse(format!("csv: {e}")))
}

fn field<'a>(rec: &'a csv::StringRecord, i: usize, line: usize) -> Result<&'a str> {
    rec.get(i)
        .ok_or_else(|| Error::Parse(format!("line {line}: missing column {}", i + 1)))
}

fn number(s: &str, line: usize, what: &str) -> Result<f64> {
    parse_finite(s).map_err(|e| Error::Parse(format!("line {line}, {what}: {e}")))
}

fn index(s: &str, line: usize) -> Result<usize> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("line {line}: `{s}` is not an iteration index")))
}

/// Parses a trace. Iteration indices must be strictly increasing, and the
/// file must end with a newline; a missing one marks an interrupted write.
pub fn parse_trace_csv(text: &str) -> Result<Vec<IterRecord>> {
    if !text.is_empty() && !text.ends_with('\n') {
        return Err(Error::InsufficientData("trace csv: last row is not terminated".into()));
    }
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let header = rdr.headers().map_err(csv_err)?.clone();
    if header.iter().ne(TRACE_HEADER.iter().copied()) {
        return Err(Error::Parse(format!("trace csv: unexpected header `{}`", header.iter().collect::<Vec<_>>().join(","))));
    }
    let mut out: Vec<IterRecord> = Vec::new();
    let mut records = rdr.records().enumerate().peekable();
    while let Some((i, rec)) = records.next() {
        let line = i + 2;
        let rec = rec.map_err(csv_err)?;
        if rec.len() != TRACE_HEADER.len() {
            // a short final row is what an interrupted write leaves behind
            if records.peek().is_none() && rec.len() < TRACE_HEADER.len() {
                return Err(Error::InsufficientData(format!("trace csv: truncated at line {line}")));
            }
            return Err(Error::Parse(format!("line {line}: expected {} fields, got {}", TRACE_HEADER.len(), rec.len())));
        }
        let k = index(field(&rec, 0, line)?, line)?;
        if out.last().is_some_and(|r| r.k >= k) {
            return Err(Error::Parse(format!("line {line}: iteration {k} out of order")));
        }
        let lyap = field(&rec, 4, line)?;
        out.push(IterRecord {
            k,
            step_norm: number(field(&rec, 1, line)?, line, "step_norm")?,
            dual_gap_norm: number(field(&rec, 2, line)?, line, "dual_gap_norm")?,
            kkt_residual: number(field(&rec, 3, line)?, line, "kkt_residual")?,
            lyapunov: if lyap.is_empty() { None } else { Some(number(lyap, line, "lyapunov")?) },
            wall_ms: number(field(&rec, 5, line)?, line, "wall_ms")?,
        });
    }
    Ok(out)
}

pub fn write_snapshot_csv(snaps: &[Snapshot]) -> Result<String> {
    let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
    w.write_record(["iter", "block", "values"]).map_err(csv_err)?;
    for s in snaps {
        for name in Snapshot::BLOCKS {
            let mut row = vec![s.k.to_string(), name.to_string()];
            // every block exists by construction
            if let Some(b) = s.block(name) {
                row.extend(b.iter().map(|x| x.to_string()));
            }
            w.write_record(&row).map_err(csv_err)?;
        }
    }
    finish(w)
}

/// Parses the snapshot sidecar for a problem of size `(n, m)`. Every
/// snapshot must list all six blocks, in any order, with matching lengths.
pub fn parse_snapshot_csv(text: &str, n: usize, m: usize) -> Result<Vec<Snapshot>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = rdr.headers().map_err(csv_err)?.clone();
    if header.get(0) != Some("iter") || header.get(1) != Some("block") {
        return Err(Error::Parse("snapshot csv: header must start with `iter,block`".into()));
    }
    let mut out: Vec<Snapshot> = Vec::new();
    let mut seen = [false; 6];
    for (i, rec) in rdr.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(csv_err)?;
        let k = index(field(&rec, 0, line)?, line)?;
        let name = field(&rec, 1, line)?;
        let slot = Snapshot::BLOCKS
            .iter()
            .position(|b| *b == name)
            .ok_or_else(|| Error::Parse(format!("line {line}: unknown block `{name}`")))?;
        let len = if matches!(name, "u" | "v" | "u_prev") { n } else { m };
        // an empty block still leaves one (empty) field after `block`
        let raw: Vec<&str> = rec.iter().skip(2).collect();
        let raw = if len == 0 && raw.iter().all(|f| f.is_empty()) { Vec::new() } else { raw };
        if raw.len() != len {
            return Err(Error::Parse(format!("line {line}: block `{name}` has {} values, expected {len}", raw.len())));
        }
        let vals: Result<Vec<f64>> = raw.iter().map(|f| number(f, line, name)).collect();
        let vals = DVector::from_vec(vals?);
        let start_new = out.last().is_none_or(|s| s.k != k);
        if start_new {
            if let Some(prev) = out.last() {
                if seen.iter().any(|s| !s) {
                    return Err(Error::Parse(format!("snapshot {} is missing blocks", prev.k)));
                }
                if prev.k > k {
                    return Err(Error::Parse(format!("line {line}: iteration {k} out of order")));
                }
            }
            seen = [false; 6];
            out.push(Snapshot {
                k,
                u: DVector::zeros(n),
                v: DVector::zeros(n),
                p: DVector::zeros(m),
                q: DVector::zeros(m),
                u_prev: DVector::zeros(n),
                p_prev: DVector::zeros(m),
            });
        }
        if seen[slot] {
            return Err(Error::Parse(format!("line {line}: block `{name}` repeated")));
        }
        seen[slot] = true;
        if let Some(snap) = out.last_mut() {
            if let Some(b) = snap.block_mut(name) {
                *b = vals;
            }
        }
    }
    if !out.is_empty() && seen.iter().any(|s| !s) {
        return Err(Error::Parse("last snapshot is missing blocks".into()));
    }
    Ok(out)
}
