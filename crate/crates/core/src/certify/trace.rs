//! Per-iteration records produced by a run.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::problem::ReferencePoint;
use crate::solver::params::{DerivedConstants, SolverParams};

/// Scalars recorded at iteration `k`, after `vᵏ, qᵏ` are formed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterRecord {
    #[serde(rename = "iter")]
    pub k: usize,
    /// `‖wᵏ⁻¹ − wᵏ‖` with `w = (v, u, p)`.
    pub step_norm: f64,
    /// `‖pᵏ − qᵏ‖`.
    pub dual_gap_norm: f64,
    pub kkt_residual: f64,
    /// `Λᵏ` at the run's reference point, when one is set.
    pub lyapunov: Option<f64>,
    pub wall_ms: f64,
}

/// Full state at iteration `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub k: usize,
    pub u: DVector<f64>,
    pub v: DVector<f64>,
    pub p: DVector<f64>,
    pub q: DVector<f64>,
    pub u_prev: DVector<f64>,
    pub p_prev: DVector<f64>,
}

impl Snapshot {
    pub const BLOCKS: [&'static str; 6] = ["u", "v", "p", "q", "u_prev", "p_prev"];

    pub fn block(&self, name: &str) -> Option<&DVector<f64>> {
        Some(match name {
            "u" => &self.u,
            "v" => &self.v,
            "p" => &self.p,
            "q" => &self.q,
            "u_prev" => &self.u_prev,
            "p_prev" => &self.p_prev,
            _ => return None,
        })
    }

    pub fn block_mut(&mut self, name: &str) -> Option<&mut DVector<f64>> {
        Some(match name {
            "u" => &mut self.u,
            "v" => &mut self.v,
            "p" => &mut self.p,
            "q" => &mut self.q,
            "u_prev" => &mut self.u_prev,
            "p_prev" => &mut self.p_prev,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RunStatus {
    /// The KKT tolerance was met.
    Converged,
    /// `‖wᵏ⁻¹ − wᵏ‖` fell below the step tolerance.
    StepTolerance,
    MaxIterations,
}

#[derive(Debug, Clone)]
pub struct RunTrace {
    pub params: SolverParams,
    pub consts: DerivedConstants,
    pub records: Vec<IterRecord>,
    pub snapshots: Vec<Snapshot>,
    pub status: RunStatus,
    /// Reference used for the Lyapunov column.
    pub reference: Option<ReferencePoint>,
    /// Last recorded `(uᵏ, pᵏ)`.
    pub final_u: DVector<f64>,
    pub final_p: DVector<f64>,
    pub linearized: bool,
    pub wall_ms: f64,
}

impl RunTrace {
    pub fn iterations(&self) -> usize {
        self.records.last().map_or(0, |r| r.k)
    }

    pub fn last(&self) -> Option<&IterRecord> {
        self.records.last()
    }

    pub fn snapshot(&self, k: usize) -> Option<&Snapshot> {
        self.snapshots
            .binary_search_by_key(&k, |s| s.k)
            .ok()
            .map(|i| &self.snapshots[i])
    }

    /// Whether snapshots cover every recorded iteration.
    pub fn dense_snapshots(&self) -> bool {
        self.snapshots.len() == self.records.len()
            && self.snapshots.iter().zip(&self.records).all(|(s, r)| s.k == r.k)
    }
}
