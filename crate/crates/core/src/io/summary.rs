//! Run summary, instance manifest and run configuration documents.

use serde::{Deserialize, Serialize};

use crate::certify::trace::{IterRecord, RunStatus, RunTrace, Snapshot};
use crate::error::{Error, Result};
use crate::problem::VIProblem;
use crate::solver::params::{DerivedConstants, ParamRequest, SolverParams};

use super::problem::ReferenceDoc;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub iters: usize,
    pub final_kkt: Option<f64>,
    pub final_step_norm: Option<f64>,
    pub status: RunStatus,
    pub params: SolverParams,
    pub constants: DerivedConstants,
    pub wall_ms: f64,
    /// Hex digest of the canonical problem JSON.
    pub problem_hash: String,
    pub reference: Option<ReferenceDoc>,
    pub final_u: Vec<f64>,
    pub final_p: Vec<f64>,
    pub linearized: bool,
    pub stride: usize,
}

impl RunSummary {
    pub fn from_trace(trace: &RunTrace, problem_hash: String, stride: usize) -> Self {
        RunSummary {
            iters: trace.iterations(),
            final_kkt: trace.last().map(|r| r.kkt_residual),
            final_step_norm: trace.last().map(|r| r.step_norm),
            status: trace.status,
            params: trace.params,
            constants: trace.consts,
            wall_ms: trace.wall_ms,
            problem_hash,
            reference: trace.reference.as_ref().map(ReferenceDoc::from_point),
            final_u: trace.final_u.as_slice().to_vec(),
            final_p: trace.final_p.as_slice().to_vec(),
            linearized: trace.linearized,
            stride,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let s: RunSummary = serde_json::from_str(text).map_err(|e| Error::Parse(format!("summary json: {e}")))?;
        if !s.final_u.iter().chain(&s.final_p).all(|x| x.is_finite()) {
            return Err(Error::Parse("summary json: non-finite final state".into()));
        }
        Ok(s)
    }

    /// Rebuilds a trace from this summary and the CSV contents, checking
    /// that they describe the same run on `problem`.
    pub fn to_trace(&self, problem: &VIProblem, records: Vec<IterRecord>, snapshots: Vec<Snapshot>) -> Result<RunTrace> {
        if self.final_u.len() != problem.n || self.final_p.len() != problem.m {
            return Err(Error::Integrity("summary state does not match the problem dimensions".into()));
        }
        let last = records.last().map_or(0, |r| r.k);
        if last < self.iters {
            return Err(Error::InsufficientData(format!(
                "trace ends at iteration {last} but the summary records {}",
                self.iters
            )));
        }
        if last > self.iters {
            return Err(Error::Integrity(format!(
                "trace ends at iteration {last} but the summary records {}",
                self.iters
            )));
        }
        if snapshots.iter().any(|s| s.k > self.iters) {
            return Err(Error::Integrity("snapshot beyond the last iteration".into()));
        }
        let reference = match &self.reference {
            Some(r) => Some(r.to_point()?),
            None => None,
        };
        Ok(RunTrace {
            params: self.params,
            consts: self.constants,
            records,
            snapshots,
            status: self.status,
            reference,
            final_u: nalgebra::DVector::from_column_slice(&self.final_u),
            final_p: nalgebra::DVector::from_column_slice(&self.final_p),
            linearized: self.linearized,
            wall_ms: self.wall_ms,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub family: String,
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    pub tau: f64,
    #[serde(rename = "L_estimate")]
    pub l_estimate: Option<f64>,
    pub reference_point: Option<ReferenceDoc>,
    pub problem_file: String,
    pub problem_hash: String,
}

impl Manifest {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("manifest json: {e}")))
    }
}

/// Overrides read from `--config`; any field left out keeps its default.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfigDoc {
    #[serde(default)]
    pub params: ParamRequest,
    pub max_iters: Option<usize>,
    pub kkt_tol: Option<f64>,
    pub step_tol: Option<f64>,
    pub stride: Option<usize>,
    pub keep_snapshots: Option<bool>,
    pub seed: Option<u64>,
    pub out: Option<String>,
    pub linearized: Option<bool>,
    pub lipschitz: Option<f64>,
}

impl RunConfigDoc {
    pub fn parse(text: &str) -> Result<Self> {
        let c: RunConfigDoc = serde_json::from_str(text).map_err(|e| Error::Parse(format!("config json: {e}")))?;
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.stride == Some(0) {
            return Err(Error::Parse("config: stride must be >= 1".into()));
        }
        for (name, v) in [("kkt_tol", self.kkt_tol), ("step_tol", self.step_tol), ("lipschitz", self.lipschitz)] {
            if let Some(x) = v {
                if !(x.is_finite() && x >= 0.0) {
                    return Err(Error::Parse(format!("config: {name} must be finite and nonnegative")));
                }
            }
        }
        Ok(())
    }
}
