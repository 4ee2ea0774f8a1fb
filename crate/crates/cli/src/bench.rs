//! `alavi bench`: generate and solve a grid of (n, seed) instances in parallel.

use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use alavi_core::certify::RunStatus;
use clap::Args;
use serde::Serialize;

use crate::exit::{to_json, write_text, CliError, CliResult, FAILED, OK};
use crate::gen::{generate, write_instance, Family};
use crate::solve::{solve_into, status_name, Settings};
use crate::source::problem_hash;

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    /// Dimensions, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
    pub seeds: Vec<u64>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, default_value = "strongly-monotone")]
    pub kind: String,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[arg(long)]
    pub max_iters: Option<usize>,
    #[arg(long)]
    pub kkt_tol: Option<f64>,
    /// Keep state snapshots (off by default to save disk).
    #[arg(long)]
    pub snapshots: bool,
    /// Batch directory; defaults to <out-root>/bench-<family>.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub seed: u64,
    pub dir: String,
    pub status: String,
    pub iters: Option<usize>,
    pub final_kkt: Option<f64>,
    pub gen_ms: f64,
    pub solve_ms: f64,
    pub error: Option<String>,
}

fn one(args: &BenchArgs, settings: &Settings, root: &Path, n: usize, seed: u64) -> BenchRow {
    let dir = root.join(format!("n{n}-s{seed}"));
    let mut row = BenchRow {
        n,
        seed,
        dir: dir.display().to_string(),
        status: "error".into(),
        iters: None,
        final_kkt: None,
        gen_ms: 0.0,
        solve_ms: 0.0,
        error: None,
    };
    let result = (|| -> CliResult<()> {
        let t0 = Instant::now();
        let problem = generate(args.family, n, args.m, seed, &args.kind)?;
        write_instance(&problem, args.family, seed, &dir.join("instance"), 4096)?;
        row.gen_ms = t0.elapsed().as_secs_f64() * 1e3;
        let hash = problem_hash(&problem)?;
        let out = solve_into(problem, &hash, settings, &dir.join("run"))?;
        row.status = out.status.map_or("diverged", status_name).to_string();
        row.iters = Some(out.iters);
        row.final_kkt = out.final_kkt;
        row.solve_ms = out.wall_ms;
        Ok(())
    })();
    if let Err(e) = result {
        row.error = Some(e.msg);
    }
    row
}

pub fn run(args: &BenchArgs, out_root: &Path) -> CliResult<u8> {
    if args.jobs == 0 {
        return Err(CliError::usage("--jobs must be at least 1"));
    }
    let root = args
        .out
        .clone()
        .unwrap_or_else(|| out_root.join(format!("bench-{}", args.family.as_str())));
    let mut settings = Settings::default();
    settings.stop.max_iters = args.max_iters.unwrap_or(settings.stop.max_iters);
    settings.stop.kkt_tol = args.kkt_tol.unwrap_or(settings.stop.kkt_tol);
    settings.keep_snapshots = args.snapshots;
    let grid: Vec<(usize, u64)> = args.n.iter().flat_map(|&n| args.seeds.iter().map(move |&s| (n, s))).collect();
    let next = AtomicUsize::new(0);
    let rows: Mutex<Vec<Option<BenchRow>>> = Mutex::new(vec![None; grid.len()]);
    std::thread::scope(|scope| {
        for _ in 0..args.jobs.min(grid.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(n, seed)) = grid.get(i) else { break };
                let row = one(args, &settings, &root, n, seed);
                eprintln!(
                    "n={n} seed={seed} status={} iters={} solve_ms={:.1}",
                    row.status,
                    row.iters.map_or("-".into(), |k| k.to_string()),
                    row.solve_ms
                );
                rows.lock().expect("bench rows")[i] = Some(row);
            });
        }
    });
    let rows: Vec<BenchRow> = rows.into_inner().expect("bench rows").into_iter().flatten().collect();
    let converged = rows.iter().all(|r| r.status == status_name(RunStatus::Converged));
    let path = root.join("bench.json");
    write_text(&path, &to_json(&rows)?)?;
    println!("{}", path.display());
    Ok(if converged { OK } else { FAILED })
}
