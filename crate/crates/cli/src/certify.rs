//! `alavi certify`: rerun the certificate checks on a saved run.

use std::path::{Path, PathBuf};

use alavi_core::certify::{
    check_descent, check_ergodic_gap, stationarity_bound, summed_squares_certificate, CertificateReport, RunTrace,
};
use alavi_core::io::{parse_snapshot_csv, parse_trace_csv, RunSummary};
use alavi_core::{Error, VIProblem};
use clap::Args;
use serde::Serialize;

use crate::exit::{read_text, to_json, write_text, CliResult, FAILED, OK};
use crate::solve::{status_name, SNAPSHOT_FILE, SUMMARY_FILE, TRACE_FILE};
use crate::source::load;

pub const REPORT_FILE: &str = "certificate.json";

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[arg(long)]
    pub problem: PathBuf,
    /// Run directory written by `solve`.
    #[arg(long)]
    pub run: PathBuf,
    /// Also check the ergodic gap bound (monotone problems only).
    #[arg(long)]
    pub monotone: bool,
    /// Averaging horizon for the gap check; defaults to the dense snapshot prefix.
    #[arg(long)]
    pub ergodic_t: Option<usize>,
    /// Report path; defaults to certificate.json in the run directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
pub struct CertifyReport {
    pub problem_hash: String,
    pub iters: usize,
    pub status: &'static str,
    pub reference_role: Option<&'static str>,
    pub checks: Vec<CertificateReport>,
    pub skipped: Vec<String>,
    pub all_hold: bool,
}

/// Rebuilds the trace from a run directory, checking it against `hash`.
pub fn load_run(problem: &VIProblem, hash: &str, dir: &Path) -> CliResult<RunTrace> {
    let summary = RunSummary::parse(&read_text(&dir.join(SUMMARY_FILE))?)?;
    if summary.problem_hash != hash {
        return Err(Error::Integrity(format!(
            "run was produced from problem {} but {} was given",
            summary.problem_hash, hash
        ))
        .into());
    }
    let records = parse_trace_csv(&read_text(&dir.join(TRACE_FILE))?)?;
    let snap_path = dir.join(SNAPSHOT_FILE);
    let snapshots = if snap_path.is_file() {
        parse_snapshot_csv(&read_text(&snap_path)?, problem.n, problem.m)?
    } else {
        Vec::new()
    };
    Ok(summary.to_trace(problem, records, snapshots)?)
}

fn dense_prefix(trace: &RunTrace) -> usize {
    trace.snapshots.iter().enumerate().take_while(|(i, s)| s.k == i + 1).count()
}

pub fn certify(problem: &VIProblem, hash: &str, trace: &RunTrace, monotone: bool, ergodic_t: Option<usize>) -> CliResult<CertifyReport> {
    let reference = problem.reference.clone().or_else(|| trace.reference.clone());
    let mut checks = Vec::new();
    let mut skipped = Vec::new();
    match &reference {
        Some(r) => {
            checks.push(check_descent(trace, r)?);
            checks.push(summed_squares_certificate(trace, r)?);
        }
        None => {
            skipped.push("lyapunov-descent: no reference point".to_string());
            skipped.push("summed-squares: no reference point".to_string());
        }
    }
    checks.push(stationarity_bound(trace, &trace.consts).1);
    if monotone {
        match &reference {
            Some(r) => {
                let t = ergodic_t.unwrap_or_else(|| dense_prefix(trace));
                if t == 0 {
                    return Err(Error::InsufficientData(
                        "the ergodic gap check needs snapshots at every iteration (solve with --stride 1)".into(),
                    )
                    .into());
                }
                checks.push(check_ergodic_gap(trace, problem, r, t)?);
            }
            None => skipped.push("ergodic-gap: no reference point".to_string()),
        }
    }
    Ok(CertifyReport {
        problem_hash: hash.to_string(),
        iters: trace.iterations(),
        status: status_name(trace.status),
        reference_role: reference.map(|r| r.role.as_str()),
        all_hold: checks.iter().all(|c| c.holds),
        checks,
        skipped,
    })
}

pub fn run(args: &CertifyArgs) -> CliResult<u8> {
    let loaded = load(&args.problem)?;
    let trace = load_run(&loaded.problem, &loaded.hash, &args.run)?;
    let report = certify(&loaded.problem, &loaded.hash, &trace, args.monotone, args.ergodic_t)?;
    for c in &report.checks {
        let first = c.first_violation.map_or("-".to_string(), |k| k.to_string());
        println!(
            "{:<20} {:<4} checked={} margin={:e} first_violation={first}",
            c.check,
            if c.holds { "pass" } else { "FAIL" },
            c.checked,
            c.margin
        );
    }
    for s in &report.skipped {
        println!("skipped {s}");
    }
    let out = args.out.clone().unwrap_or_else(|| args.run.join(REPORT_FILE));
    write_text(&out, &to_json(&report)?)?;
    Ok(if report.all_hold { OK } else { FAILED })
}
