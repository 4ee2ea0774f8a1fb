//! Exit codes and the error type every subcommand returns.

use std::fmt;
use std::path::Path;

use alavi_core::Error;

pub const OK: u8 = 0;
/// Ran to completion but did not converge, a check failed or a fixture disagreed.
pub const FAILED: u8 = 1;
pub const DIVERGED: u8 = 2;
pub const USAGE: u8 = 64;
/// Files disagree with each other, or hold too little to check.
pub const DATA: u8 = 65;
pub const SOFTWARE: u8 = 70;
pub const CANT_WRITE: u8 = 74;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub msg: String,
}

impl CliError {
    pub fn new(code: u8, msg: impl Into<String>) -> Self {
        CliError { code, msg: msg.into() }
    }

    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::new(USAGE, msg)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.msg)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Usage(_) | Error::Parse(_) | Error::Dimension { .. } | Error::Parameter(_) | Error::Io(_) => USAGE,
            Error::Integrity(_) | Error::InsufficientData(_) => DATA,
            Error::Divergence { .. } => DIVERGED,
            _ => SOFTWARE,
        };
        CliError::new(code, e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub fn read_text(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))
}

pub fn write_text(path: &Path, text: &str) -> CliResult<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)
                .map_err(|e| CliError::new(CANT_WRITE, format!("cannot create {}: {e}", dir.display())))?;
        }
    }
    std::fs::write(path, text).map_err(|e| CliError::new(CANT_WRITE, format!("cannot write {}: {e}", path.display())))
}

pub fn to_json<T: serde::Serialize>(value: &T) -> CliResult<String> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| CliError::new(SOFTWARE, format!("json: {e}")))
}
