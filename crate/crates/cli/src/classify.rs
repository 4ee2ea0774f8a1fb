//! `alavi classify`: sampling-based monotonicity refutation.

use std::path::PathBuf;

use alavi_core::monotonicity::{appendix_fixtures, classify, ClassifyOptions, MonotonicityReport, Verdict};
use clap::Args;
use serde::Serialize;

use crate::exit::{to_json, write_text, CliError, CliResult, FAILED, OK};
use crate::source::load;

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    /// Problem JSON, manifest, or a directory holding one.
    #[arg(long, required_unless_present = "fixtures", conflicts_with = "fixtures")]
    pub problem: Option<PathBuf>,
    /// Run the built-in worked examples and compare with their known verdicts.
    #[arg(long)]
    pub fixtures: bool,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Report path; the JSON goes to stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
pub struct FixtureLine {
    pub fixture: &'static str,
    pub class: &'static str,
    pub expected_refuted: bool,
    pub refuted: bool,
    pub ok: bool,
}

#[derive(Debug, Serialize)]
pub struct FixtureReport {
    pub lines: Vec<FixtureLine>,
    pub reports: Vec<(&'static str, MonotonicityReport)>,
    pub all_match: bool,
}

fn options(args: &ClassifyArgs) -> ClassifyOptions {
    ClassifyOptions {
        samples: args.samples,
        seed: args.seed,
        tol: args.tol,
        ..ClassifyOptions::default()
    }
}

pub fn run_fixtures(opts: &ClassifyOptions) -> CliResult<FixtureReport> {
    let mut lines = Vec::new();
    let mut reports = Vec::new();
    for f in appendix_fixtures()? {
        let o = ClassifyOptions {
            extra_pairs: f.witness_pairs(),
            ..opts.clone()
        };
        let rep = classify(&f.problem, Some(&f.reference), &o)?;
        for &(class, expected) in &f.expected {
            let refuted = rep.get(class).verdict == Verdict::Refuted;
            lines.push(FixtureLine {
                fixture: f.name,
                class: class.as_str(),
                expected_refuted: expected,
                refuted,
                ok: refuted == expected,
            });
        }
        reports.push((f.name, rep));
    }
    Ok(FixtureReport {
        all_match: lines.iter().all(|l| l.ok),
        lines,
        reports,
    })
}

fn emit(args: &ClassifyArgs, json: &str) -> CliResult<()> {
    match &args.out {
        Some(p) => write_text(p, json),
        None => {
            print!("{json}");
            Ok(())
        }
    }
}

fn verdict_word(refuted: bool) -> &'static str {
    if refuted {
        "refuted"
    } else {
        "not-refuted"
    }
}

pub fn run(args: &ClassifyArgs) -> CliResult<u8> {
    let opts = options(args);
    if args.fixtures {
        let rep = run_fixtures(&opts)?;
        for l in &rep.lines {
            eprintln!(
                "{:<20} {:<28} expected={:<11} got={:<11} {}",
                l.fixture,
                l.class,
                verdict_word(l.expected_refuted),
                verdict_word(l.refuted),
                if l.ok { "ok" } else { "MISMATCH" }
            );
        }
        emit(args, &to_json(&rep)?)?;
        return Ok(if rep.all_match { OK } else { FAILED });
    }
    let path = args.problem.as_ref().ok_or_else(|| CliError::usage("--problem or --fixtures is required"))?;
    let loaded = load(path)?;
    let rep = classify(&loaded.problem, loaded.problem.reference.as_ref(), &opts)?;
    for (class, r) in &rep.results {
        eprintln!("{:<28} {:?}", class.as_str(), r.verdict);
    }
    emit(args, &to_json(&rep)?)?;
    Ok(OK)
}
