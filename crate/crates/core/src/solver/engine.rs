//! The iteration
//!
//! ```text
//! vᵏ   = (1 − η)uᵏ + η vᵏ⁻¹
//! qᵏ   = Π(pᵏ + γΘ(uᵏ))
//! uᵏ⁺¹ = argmin_U ⟨G(uᵏ), u⟩ + J(u) + ⟨qᵏ, Θ(u)⟩ + ‖u − vᵏ‖²/(2α)
//! pᵏ⁺¹ = Π(pᵏ + γΘ(uᵏ⁺¹))
//! ```
//!
//! A run starts from `u⁰ = u₀`, `v⁻¹ = u₀`, `p⁰` (zero by default) and performs
//! one step before the first record, so record `k ≥ 1` always refers to an
//! iterate produced by the scheme.

use std::time::Instant;

use nalgebra::DVector;

use crate::certify::kkt::kkt_from_parts;
use crate::certify::lyapunov::lyapunov_value;
use crate::certify::trace::{IterRecord, RunStatus, RunTrace, Snapshot};
use crate::error::{check_dim, Error, Result};
use crate::problem::{ReferencePoint, VIProblem};
use crate::solver::params::{DerivedConstants, SolverParams};
use crate::solver::subproblem::{solve_primal_subproblem, ConstraintTerm, InnerTolerance, Strategy};

/// Primal-dual state entering iteration `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct IterateState {
    pub k: usize,
    pub u: DVector<f64>,
    /// `vᵏ⁻¹`.
    pub v: DVector<f64>,
    pub p: DVector<f64>,
    /// `qᵏ⁻¹`.
    pub q: DVector<f64>,
    pub u_prev: DVector<f64>,
    pub p_prev: DVector<f64>,
    /// `Θ(uᵏ)`.
    pub theta_u: DVector<f64>,
    /// `G(uᵏ)`.
    pub g_u: DVector<f64>,
}

impl IterateState {
    /// `u = v = u₀`, `q = p = p₀`.
    pub fn new(problem: &VIProblem, u0: DVector<f64>, p0: DVector<f64>) -> Result<Self> {
        check_dim("initial u", problem.n, u0.len())?;
        check_dim("initial p", problem.m, p0.len())?;
        if !problem.cone.in_dual(&p0, 0.0) {
            return Err(Error::Usage("initial multiplier must lie in the dual cone".into()));
        }
        let theta_u = problem.theta.eval(&u0);
        let g_u = problem.g.eval(&u0);
        Ok(IterateState {
            k: 0,
            v: u0.clone(),
            u_prev: u0.clone(),
            q: p0.clone(),
            p_prev: p0.clone(),
            u: u0,
            p: p0,
            theta_u,
            g_u,
        })
    }

    fn all_finite(&self) -> bool {
        let ok = |x: &DVector<f64>| x.iter().all(|v| v.is_finite());
        ok(&self.u) && ok(&self.p) && ok(&self.theta_u) && ok(&self.g_u)
    }
}

/// `(vᵏ, qᵏ)` from the state entering iteration `k`.
pub fn extrapolate(state: &IterateState, problem: &VIProblem, params: &SolverParams) -> (DVector<f64>, DVector<f64>) {
    let v = &state.u * (1.0 - params.eta) + &state.v * params.eta;
    let q = problem.cone.dual_project(&(&state.p + &state.theta_u * params.gamma));
    (v, q)
}

/// The primal and dual updates given `vᵏ, qᵏ`.
#[allow(clippy::too_many_arguments)]
fn advance(
    state: &IterateState,
    problem: &VIProblem,
    params: &SolverParams,
    v: DVector<f64>,
    q: DVector<f64>,
    strategy: Strategy,
    linearized: bool,
    inner_tol: f64,
) -> Result<IterateState> {
    let term = if linearized {
        ConstraintTerm::Linearized(&state.u)
    } else {
        ConstraintTerm::Exact
    };
    let inner = InnerTolerance {
        tol: inner_tol,
        iteration: state.k,
    };
    let u = solve_primal_subproblem(problem, &state.g_u, &q, &v, params.alpha, strategy, term, inner)?;
    let theta_u = problem.theta.eval(&u);
    let p = problem.cone.dual_project(&(&state.p + &theta_u * params.gamma));
    let g_u = problem.g.eval(&u);
    Ok(IterateState {
        k: state.k + 1,
        u_prev: state.u.clone(),
        p_prev: state.p.clone(),
        u,
        v,
        p,
        q,
        theta_u,
        g_u,
    })
}

/// One iteration with the exact constraint term.
pub fn alavi_step(state: &IterateState, problem: &VIProblem, params: &SolverParams) -> Result<IterateState> {
    let (v, q) = extrapolate(state, problem, params);
    advance(state, problem, params, v, q, Strategy::Auto, false, 1e-12)
}

/// One iteration with `⟨q, Θ(u)⟩` replaced by `⟨q, ∇Θ(uᵏ)·u⟩`.
pub fn alavi_step_linearized(state: &IterateState, problem: &VIProblem, params: &SolverParams) -> Result<IterateState> {
    let (v, q) = extrapolate(state, problem, params);
    advance(state, problem, params, v, q, Strategy::ClosedForm, true, 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StopRule {
    pub max_iters: usize,
    /// Stop once the KKT value is at most this.
    pub kkt_tol: f64,
    /// Stop once `‖wᵏ⁻¹ − wᵏ‖` is at most this; 0 disables.
    pub step_tol: f64,
}

impl Default for StopRule {
    fn default() -> Self {
        StopRule {
            max_iters: 200_000,
            kkt_tol: 1e-6,
            step_tol: 0.0,
        }
    }
}

impl StopRule {
    pub fn validate(&self) -> Result<()> {
        if !(self.kkt_tol >= 0.0) || !(self.step_tol >= 0.0) {
            return Err(Error::Usage("stopping tolerances must be nonnegative".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub stop: StopRule,
    /// Keep a snapshot every `stride` iterations (and at termination).
    pub stride: usize,
    pub keep_snapshots: bool,
    /// `u₀`; defaults to the all-ones vector projected onto `U`.
    pub start_u: Option<DVector<f64>>,
    /// `p⁰`; defaults to zero.
    pub start_p: Option<DVector<f64>>,
    /// Point for the Lyapunov column; defaults to the problem's reference.
    pub reference: Option<ReferencePoint>,
    pub strategy: Strategy,
    pub linearized: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            stop: StopRule::default(),
            stride: 10,
            keep_snapshots: true,
            start_u: None,
            start_p: None,
            reference: None,
            strategy: Strategy::Auto,
            linearized: false,
        }
    }
}

pub fn alavi_run(
    problem: &VIProblem,
    params: &SolverParams,
    consts: &DerivedConstants,
    opts: &RunOptions,
) -> Result<RunTrace> {
    alavi_run_with(problem, params, consts, opts, &mut |_| {})
}

/// [`alavi_run`] with a callback invoked on every record.
pub fn alavi_run_with(
    problem: &VIProblem,
    params: &SolverParams,
    consts: &DerivedConstants,
    opts: &RunOptions,
    on_record: &mut dyn FnMut(&IterRecord),
) -> Result<RunTrace> {
    opts.stop.validate()?;
    if opts.stride == 0 {
        return Err(Error::Usage("snapshot stride must be at least 1".into()));
    }
    let started = Instant::now();
    let u0 = opts
        .start_u
        .clone()
        .unwrap_or_else(|| problem.feasible.project(&DVector::from_element(problem.n, 1.0)));
    let p0 = opts.start_p.clone().unwrap_or_else(|| DVector::zeros(problem.m));
    let reference = opts.reference.clone().or_else(|| problem.reference.clone());
    if let Some(r) = &reference {
        check_dim("reference u", problem.n, r.u.len())?;
        check_dim("reference p", problem.m, r.p.len())?;
    }
    let mut trace = RunTrace {
        params: *params,
        consts: *consts,
        records: Vec::new(),
        snapshots: Vec::new(),
        status: RunStatus::MaxIterations,
        reference: reference.clone(),
        final_u: u0.clone(),
        final_p: p0.clone(),
        linearized: opts.linearized,
        wall_ms: 0.0,
    };
    let mut state = IterateState::new(problem, u0, p0)?;
    if !state.all_finite() {
        return Err(divergence(0, "non-finite value at the starting point", &state));
    }
    if opts.stop.max_iters == 0 {
        return Ok(trace);
    }

    let step = |state: &IterateState, v, q, inner_tol| {
        let next = advance(state, problem, params, v, q, opts.strategy, opts.linearized, inner_tol)?;
        if next.all_finite() {
            Ok(next)
        } else {
            Err(divergence(next.k, "non-finite iterate", state))
        }
    };

    // bootstrap: produces u¹, p¹ from (u⁰, v⁻¹ = u⁰, p⁰)
    let (v, q) = extrapolate(&state, problem, params);
    let kkt0 = kkt_from_parts(problem, &state.u, &state.p, &state.g_u, &state.theta_u).value;
    state = step(&state, v, q, inner_tolerance(kkt0))?;

    for k in 1..=opts.stop.max_iters {
        let (v, q) = extrapolate(&state, problem, params);
        let step_norm = ((&state.v - &v).norm_squared()
            + (&state.u_prev - &state.u).norm_squared()
            + (&state.p_prev - &state.p).norm_squared())
        .sqrt();
        let kkt = kkt_from_parts(problem, &state.u, &state.p, &state.g_u, &state.theta_u);
        let lyapunov = reference
            .as_ref()
            .map(|r| lyapunov_value(&v, &state.u_prev, &state.u, &state.p_prev, r, consts));
        let rec = IterRecord {
            k,
            step_norm,
            dual_gap_norm: (&state.p - &q).norm(),
            kkt_residual: kkt.value,
            lyapunov,
            wall_ms: started.elapsed().as_secs_f64() * 1e3,
        };
        trace.records.push(rec);
        on_record(&rec);

        let status = if kkt.value <= opts.stop.kkt_tol {
            Some(RunStatus::Converged)
        } else if opts.stop.step_tol > 0.0 && step_norm <= opts.stop.step_tol {
            Some(RunStatus::StepTolerance)
        } else if k == opts.stop.max_iters {
            Some(RunStatus::MaxIterations)
        } else {
            None
        };
        if opts.keep_snapshots && (k % opts.stride == 0 || status.is_some()) {
            trace.snapshots.push(Snapshot {
                k,
                u: state.u.clone(),
                v: v.clone(),
                p: state.p.clone(),
                q: q.clone(),
                u_prev: state.u_prev.clone(),
                p_prev: state.p_prev.clone(),
            });
        }
        if let Some(s) = status {
            trace.status = s;
            break;
        }
        state = step(&state, v, q, inner_tolerance(kkt.value))?;
    }
    trace.final_u = state.u;
    trace.final_p = state.p;
    trace.wall_ms = started.elapsed().as_secs_f64() * 1e3;
    Ok(trace)
}

/// Inner subproblem tolerance, tied to the outer residual.
fn inner_tolerance(outer_kkt: f64) -> f64 {
    (1e-2 * outer_kkt).min(1e-10).max(1e-14)
}

fn divergence(iteration: usize, reason: &str, last_finite: &IterateState) -> Error {
    Error::Divergence {
        iteration,
        reason: reason.into(),
        last_u: last_finite.u.iter().copied().collect(),
        last_p: last_finite.p.iter().copied().collect(),
    }
}
