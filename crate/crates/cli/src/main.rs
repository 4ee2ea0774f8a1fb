//! `alavi`: generate instances, run solves, check certificates and classify maps.

mod bench;
mod certify;
mod classify;
mod exit;
mod gen;
mod solve;
mod source;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "alavi", version)]
#[command(about = "Primal-dual solver for constrained mixed variational inequalities")]
struct Cli {
    /// Root for default output directories.
    #[arg(long, global = true, env = "ALAVI_OUT", default_value = "alavi-out")]
    out_root: PathBuf,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a seeded instance and its manifest
    Gen(gen::GenArgs),
    /// Solve a problem and write trace, snapshots and summary
    Solve(solve::SolveArgs),
    /// Check the convergence certificates of a saved run
    Certify(certify::CertifyArgs),
    /// Look for counterexamples to generalized monotonicity
    Classify(classify::ClassifyArgs),
    /// Generate and solve a grid of instances in parallel
    Bench(bench::BenchArgs),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { exit::OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Gen(a) => gen::run(a, &cli.out_root),
        Command::Solve(a) => solve::run(a, &cli.out_root),
        Command::Certify(a) => certify::run(a),
        Command::Classify(a) => classify::run(a),
        Command::Bench(a) => bench::run(a, &cli.out_root),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("alavi: {e}");
            ExitCode::from(e.code)
        }
    }
}
