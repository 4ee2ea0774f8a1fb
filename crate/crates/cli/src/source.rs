//! Locating and loading a problem from a file, a manifest or a directory.

use std::path::{Path, PathBuf};

use alavi_core::io::{canonical_problem_json, read_problem, Manifest};
use alavi_core::{Error, VIProblem};
use sha2::{Digest, Sha256};

use crate::exit::{read_text, CliError, CliResult};

pub const MANIFEST_FILE: &str = "manifest.json";
pub const PROBLEM_FILE: &str = "problem.json";

pub struct Loaded {
    pub problem: VIProblem,
    pub hash: String,
}

/// SHA-256 of the canonical problem JSON, hex encoded.
pub fn problem_hash(problem: &VIProblem) -> CliResult<String> {
    let text = canonical_problem_json(problem)?;
    Ok(hex::encode(Sha256::digest(text.as_bytes())))
}

/// Accepts a problem JSON, a manifest, or a directory holding either.
pub fn load(path: &Path) -> CliResult<Loaded> {
    let file = if path.is_dir() {
        let m = path.join(MANIFEST_FILE);
        let p = path.join(PROBLEM_FILE);
        if m.is_file() {
            m
        } else if p.is_file() {
            p
        } else {
            return Err(CliError::usage(format!(
                "{} holds neither {MANIFEST_FILE} nor {PROBLEM_FILE}",
                path.display()
            )));
        }
    } else {
        path.to_path_buf()
    };
    let text = read_text(&file)?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| CliError::usage(format!("{}: {e}", file.display())))?;
    if value.get("problem_file").is_some() {
        let manifest = Manifest::parse(&text)?;
        let base = file.parent().unwrap_or_else(|| Path::new("."));
        let problem = read_problem_at(&base.join(&manifest.problem_file))?;
        let hash = problem_hash(&problem)?;
        if hash != manifest.problem_hash {
            return Err(Error::Integrity(format!(
                "problem hash {hash} does not match the manifest ({})",
                manifest.problem_hash
            ))
            .into());
        }
        return Ok(Loaded { problem, hash });
    }
    let problem = read_problem_at(&file)?;
    let hash = problem_hash(&problem)?;
    Ok(Loaded { problem, hash })
}

fn read_problem_at(path: &PathBuf) -> CliResult<VIProblem> {
    read_problem(path).map_err(|e| match e {
        Error::Io(io) => CliError::usage(format!("cannot read {}: {io}", path.display())),
        other => CliError::from(other),
    })
}
