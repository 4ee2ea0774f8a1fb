//! `alavi solve`: run the iteration and write trace, snapshots and summary.

use std::path::{Path, PathBuf};

use alavi_core::certify::{IterRecord, RunStatus};
use alavi_core::instances::LIPSCHITZ_SAMPLES;
use alavi_core::io::{write_snapshot_csv, write_trace_csv, RunConfigDoc, RunSummary};
use alavi_core::solver::{alavi_run_with, estimate_lipschitz, resolve_params, ParamRequest, RunOptions, StopRule};
use alavi_core::{Error, VIProblem};
use clap::Args;
use serde_json::json;

use crate::exit::{read_text, to_json, write_text, CliError, CliResult, DIVERGED, FAILED, OK};
use crate::source::load;

pub const TRACE_FILE: &str = "trace.csv";
pub const SNAPSHOT_FILE: &str = "snapshots.csv";
pub const SUMMARY_FILE: &str = "summary.json";
pub const DIVERGENCE_FILE: &str = "divergence.json";

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Problem JSON, manifest, or a directory holding one.
    #[arg(long)]
    pub problem: PathBuf,
    /// JSON run configuration; flags given here override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub eta: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub max_iters: Option<usize>,
    #[arg(long)]
    pub kkt_tol: Option<f64>,
    /// Stop once the primal-dual step falls below this; 0 disables.
    #[arg(long)]
    pub step_tol: Option<f64>,
    /// Snapshot every this many iterations.
    #[arg(long)]
    pub stride: Option<usize>,
    #[arg(long)]
    pub no_snapshots: bool,
    /// Linearize the constraint term in the primal step.
    #[arg(long)]
    pub linearized: bool,
    /// Overrides the Lipschitz constant stored with the problem.
    #[arg(long)]
    pub lipschitz: Option<f64>,
    /// Seed for the Lipschitz estimate when the problem has none.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Run directory; defaults to <out-root>/run-<problem hash prefix>.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub struct Settings {
    pub params: ParamRequest,
    pub stop: StopRule,
    pub stride: usize,
    pub keep_snapshots: bool,
    pub linearized: bool,
    pub lipschitz: Option<f64>,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

impl Default for Settings {
    fn default() -> Self {
        let opts = RunOptions::default();
        Settings {
            params: ParamRequest::default(),
            stop: opts.stop,
            stride: opts.stride,
            keep_snapshots: opts.keep_snapshots,
            linearized: false,
            lipschitz: None,
            seed: 1,
            out: None,
        }
    }
}

impl Settings {
    pub fn apply_config(&mut self, c: &RunConfigDoc) {
        self.params.eta = c.params.eta.or(self.params.eta);
        self.params.gamma = c.params.gamma.or(self.params.gamma);
        self.params.alpha = c.params.alpha.or(self.params.alpha);
        self.stop.max_iters = c.max_iters.unwrap_or(self.stop.max_iters);
        self.stop.kkt_tol = c.kkt_tol.unwrap_or(self.stop.kkt_tol);
        self.stop.step_tol = c.step_tol.unwrap_or(self.stop.step_tol);
        self.stride = c.stride.unwrap_or(self.stride);
        self.keep_snapshots = c.keep_snapshots.unwrap_or(self.keep_snapshots);
        self.linearized = c.linearized.unwrap_or(self.linearized);
        self.lipschitz = c.lipschitz.or(self.lipschitz);
        self.seed = c.seed.unwrap_or(self.seed);
        if let Some(o) = &c.out {
            self.out = Some(PathBuf::from(o));
        }
    }

    fn apply_flags(&mut self, a: &SolveArgs) {
        self.params.eta = a.eta.or(self.params.eta);
        self.params.gamma = a.gamma.or(self.params.gamma);
        self.params.alpha = a.alpha.or(self.params.alpha);
        self.stop.max_iters = a.max_iters.unwrap_or(self.stop.max_iters);
        self.stop.kkt_tol = a.kkt_tol.unwrap_or(self.stop.kkt_tol);
        self.stop.step_tol = a.step_tol.unwrap_or(self.stop.step_tol);
        self.stride = a.stride.unwrap_or(self.stride);
        self.keep_snapshots &= !a.no_snapshots;
        self.linearized |= a.linearized;
        self.lipschitz = a.lipschitz.or(self.lipschitz);
        self.seed = a.seed.unwrap_or(self.seed);
        if a.out.is_some() {
            self.out = a.out.clone();
        }
    }
}

/// What a finished (or diverged) solve left behind.
pub struct Outcome {
    pub dir: PathBuf,
    pub status: Option<RunStatus>,
    pub iters: usize,
    pub final_kkt: Option<f64>,
    pub wall_ms: f64,
}

impl Outcome {
    pub fn exit_code(&self) -> u8 {
        match self.status {
            Some(RunStatus::Converged) => OK,
            Some(_) => FAILED,
            None => DIVERGED,
        }
    }
}

/// Solves `problem` and writes the run files into `dir`.
pub fn solve_into(mut problem: VIProblem, hash: &str, s: &Settings, dir: &Path) -> CliResult<Outcome> {
    if s.stride == 0 {
        return Err(CliError::usage("stride must be at least 1"));
    }
    if let Some(l) = s.lipschitz {
        problem.g = problem.g.clone().with_lipschitz(l);
    } else if problem.g.lipschitz.is_none() {
        let l = estimate_lipschitz(&problem.g, &problem.feasible, LIPSCHITZ_SAMPLES, s.seed)?;
        problem.g = problem.g.clone().with_lipschitz(l);
    }
    let (params, consts) = resolve_params(&problem, &s.params)?;
    let opts = RunOptions {
        stop: s.stop,
        stride: s.stride,
        keep_snapshots: s.keep_snapshots,
        linearized: s.linearized,
        ..RunOptions::default()
    };
    let mut records: Vec<IterRecord> = Vec::new();
    let result = alavi_run_with(&problem, &params, &consts, &opts, &mut |r| records.push(r.clone()));
    let trace = match result {
        Ok(t) => t,
        Err(Error::Divergence {
            iteration,
            reason,
            last_u,
            last_p,
        }) => {
            write_text(&dir.join(TRACE_FILE), &write_trace_csv(&records)?)?;
            let dump = json!({
                "iteration": iteration,
                "reason": reason,
                "last_u": last_u,
                "last_p": last_p,
                "params": params,
                "problem_hash": hash,
            });
            write_text(&dir.join(DIVERGENCE_FILE), &to_json(&dump)?)?;
            eprintln!("diverged at iteration {iteration}: {reason}; last finite state in {}", dir.join(DIVERGENCE_FILE).display());
            return Ok(Outcome {
                dir: dir.to_path_buf(),
                status: None,
                iters: iteration,
                final_kkt: None,
                wall_ms: 0.0,
            });
        }
        Err(e) => return Err(e.into()),
    };
    write_text(&dir.join(TRACE_FILE), &write_trace_csv(&trace.records)?)?;
    if s.keep_snapshots {
        write_text(&dir.join(SNAPSHOT_FILE), &write_snapshot_csv(&trace.snapshots)?)?;
    }
    let summary = RunSummary::from_trace(&trace, hash.to_string(), s.stride);
    write_text(&dir.join(SUMMARY_FILE), &to_json(&summary)?)?;
    Ok(Outcome {
        dir: dir.to_path_buf(),
        status: Some(trace.status),
        iters: summary.iters,
        final_kkt: summary.final_kkt,
        wall_ms: summary.wall_ms,
    })
}

pub fn default_dir(root: &Path, hash: &str) -> PathBuf {
    root.join(format!("run-{}", &hash[..hash.len().min(12)]))
}

pub fn run(args: &SolveArgs, out_root: &Path) -> CliResult<u8> {
    let mut settings = Settings::default();
    if let Some(path) = &args.config {
        settings.apply_config(&RunConfigDoc::parse(&read_text(path)?)?);
    }
    settings.apply_flags(args);
    let loaded = load(&args.problem)?;
    let dir = settings.out.clone().unwrap_or_else(|| default_dir(out_root, &loaded.hash));
    let out = solve_into(loaded.problem, &loaded.hash, &settings, &dir)?;
    if let Some(status) = out.status {
        println!(
            "status={} iters={} final_kkt={:e} out={}",
            status_name(status),
            out.iters,
            out.final_kkt.unwrap_or(f64::NAN),
            out.dir.display()
        );
    }
    Ok(out.exit_code())
}

pub fn status_name(s: RunStatus) -> &'static str {
    match s {
        RunStatus::Converged => "converged",
        RunStatus::StepTolerance => "step-tolerance",
        RunStatus::MaxIterations => "max-iterations",
    }
}
