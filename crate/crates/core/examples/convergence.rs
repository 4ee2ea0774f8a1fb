//! Generates one benchmark instance, solves it with automatic parameters and
//! prints the KKT error every few thousand iterations.
//!
//! cargo run --release -p alavi-core --example convergence -- ncvi2 500 1

use std::time::Instant;

use alavi_core::instances::{gen_ncvi1, gen_ncvi2};
use alavi_core::solver::engine::{alavi_run, RunOptions, StopRule};
use alavi_core::solver::params::{resolve_params, ParamRequest};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let family = args.first().map_or("ncvi1", String::as_str);
    let n: usize = args.get(1).map_or(Ok(100), |s| s.parse())?;
    let seed: u64 = args.get(2).map_or(Ok(1), |s| s.parse())?;

    let t0 = Instant::now();
    let (problem, tol) = match family {
        "ncvi1" => (gen_ncvi1(n, seed)?, 1e-6),
        "ncvi2" => (gen_ncvi2(n, seed)?, 1e-5),
        other => return Err(format!("unknown family {other}; use ncvi1 or ncvi2").into()),
    };
    println!("generated {family} n={n} seed={seed} in {:?}", t0.elapsed());

    let (params, consts) = resolve_params(&problem, &ParamRequest::default())?;
    println!(
        "L={:.3e} eta={:.4} gamma={:.3e} alpha={:.3e}",
        consts.lipschitz, params.eta, params.gamma, params.alpha
    );
    let opts = RunOptions {
        stop: StopRule {
            kkt_tol: tol,
            ..StopRule::default()
        },
        keep_snapshots: false,
        ..RunOptions::default()
    };
    let t1 = Instant::now();
    let trace = alavi_run(&problem, &params, &consts, &opts)?;
    for r in trace.records.iter().filter(|r| r.k % 5000 == 0) {
        println!("k={:>7} kkt={:.3e} step={:.3e}", r.k, r.kkt_residual, r.step_norm);
    }
    let last = trace.last().map_or(f64::NAN, |r| r.kkt_residual);
    println!(
        "{:?} after {} iterations, kkt={last:.3e}, {:?}",
        trace.status,
        trace.iterations(),
        t1.elapsed()
    );
    Ok(())
}
