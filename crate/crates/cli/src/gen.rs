//! `alavi gen`: write a seeded instance and its manifest.

use std::path::{Path, PathBuf};

use alavi_core::instances::{gen_monotone_affine, gen_ncvi1, gen_ncvi2, gen_ncvi2_with_rows, AffineKind};
use alavi_core::io::problem::ReferenceDoc;
use alavi_core::io::{write_problem, Manifest};
use alavi_core::{Error, VIProblem};
use clap::{Args, ValueEnum};

use crate::exit::{to_json, write_text, CliError, CliResult, CANT_WRITE};
use crate::source::{problem_hash, MANIFEST_FILE, PROBLEM_FILE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// Box-and-budget family with a non-monotone quadratic-form map.
    Ncvi1,
    /// Polyhedral family with an L1 term and a sharp Minty point.
    Ncvi2,
    /// Monotone affine map on a box with random linear rows.
    Affine,
}

impl Family {
    pub fn as_str(&self) -> &'static str {
        match self {
            Family::Ncvi1 => "ncvi1",
            Family::Ncvi2 => "ncvi2",
            Family::Affine => "affine",
        }
    }
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    #[arg(long)]
    pub n: usize,
    /// Constraint rows (ncvi2 and affine only).
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Affine map kind: psd-linear | strongly-monotone.
    #[arg(long, default_value = "strongly-monotone")]
    pub kind: String,
    /// Matrices with more entries than this go to CSV files.
    #[arg(long, default_value_t = 4096)]
    pub inline_limit: usize,
    /// Output directory; defaults to <out-root>/<family>-n<N>-s<seed>.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn generate(family: Family, n: usize, m: Option<usize>, seed: u64, kind: &str) -> CliResult<VIProblem> {
    let problem = match family {
        Family::Ncvi1 => {
            if m.is_some_and(|m| m != 1) {
                return Err(CliError::usage("ncvi1 always has a single budget row"));
            }
            gen_ncvi1(n, seed)?
        }
        Family::Ncvi2 => match m {
            Some(m) => gen_ncvi2_with_rows(n, m, seed)?,
            None => gen_ncvi2(n, seed)?,
        },
        Family::Affine => gen_monotone_affine(n, m.unwrap_or(n / 2), seed, AffineKind::parse(kind)?)?,
    };
    Ok(problem)
}

pub fn default_dir(root: &Path, family: Family, n: usize, seed: u64) -> PathBuf {
    root.join(format!("{}-n{n}-s{seed}", family.as_str()))
}

/// Writes the problem files and manifest into `dir`; returns the manifest path.
pub fn write_instance(problem: &VIProblem, family: Family, seed: u64, dir: &Path, inline_limit: usize) -> CliResult<PathBuf> {
    write_problem(problem, dir, inline_limit).map_err(|e| match e {
        Error::Io(io) => CliError::new(CANT_WRITE, format!("cannot write into {}: {io}", dir.display())),
        other => other.into(),
    })?;
    let manifest = Manifest {
        family: family.as_str().to_string(),
        n: problem.n,
        m: problem.m,
        seed,
        tau: problem.theta.tau,
        l_estimate: problem.g.lipschitz,
        reference_point: problem.reference.as_ref().map(ReferenceDoc::from_point),
        problem_file: PROBLEM_FILE.to_string(),
        problem_hash: problem_hash(problem)?,
    };
    let path = dir.join(MANIFEST_FILE);
    write_text(&path, &to_json(&manifest)?)?;
    Ok(path)
}

pub fn run(args: &GenArgs, out_root: &Path) -> CliResult<u8> {
    let problem = generate(args.family, args.n, args.m, args.seed, &args.kind)?;
    let dir = args
        .out
        .clone()
        .unwrap_or_else(|| default_dir(out_root, args.family, args.n, args.seed));
    let manifest = write_instance(&problem, args.family, args.seed, &dir, args.inline_limit)?;
    println!("{}", manifest.display());
    Ok(crate::exit::OK)
}
