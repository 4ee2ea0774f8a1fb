//! File formats: problem JSON, matrix CSV, trace and snapshot CSV, run
//! summary, manifest and run configuration.

pub mod matrix;
pub mod problem;
pub mod summary;
pub mod trace;

pub use matrix::{parse_matrix_csv, write_matrix_csv};
pub use problem::{canonical_problem_json, read_problem, write_problem, ProblemDoc};
pub use summary::{Manifest, RunConfigDoc, RunSummary};
pub use trace::{parse_snapshot_csv, parse_trace_csv, write_snapshot_csv, write_trace_csv};
