//! The potential `Λᵏ(u, p) = β₁‖vᵏ − u‖² + β₂‖uᵏ⁻¹ − uᵏ‖² + β₃‖pᵏ⁻¹ − p‖²`
//! and the checks built on it.

use nalgebra::DVector;

use crate::certify::report::CertificateReport;
use crate::certify::trace::RunTrace;
use crate::error::{Error, Result};
use crate::problem::{ReferencePoint, ReferenceRole, VIProblem};
use crate::solver::params::DerivedConstants;

/// Relative slack used by the descent checks.
pub const DESCENT_TOL: f64 = 1e-9;

pub fn lyapunov_value(
    v: &DVector<f64>,
    u_prev: &DVector<f64>,
    u: &DVector<f64>,
    p_prev: &DVector<f64>,
    reference: &ReferencePoint,
    consts: &DerivedConstants,
) -> f64 {
    consts.beta1 * (v - &reference.u).norm_squared()
        + consts.beta2 * (u_prev - u).norm_squared()
        + consts.beta3 * (p_prev - &reference.p).norm_squared()
}

/// `Λᵏ(ref)` for every record, from the stored column when it was computed at
/// `reference`, otherwise recomputed from dense snapshots.
pub fn lyapunov_series(trace: &RunTrace, reference: &ReferencePoint) -> Result<Vec<f64>> {
    let same_ref = trace
        .reference
        .as_ref()
        .is_some_and(|r| r.u == reference.u && r.p == reference.p);
    if same_ref {
        if let Some(col) = trace.records.iter().map(|r| r.lyapunov).collect::<Option<Vec<f64>>>() {
            return Ok(col);
        }
    }
    if !trace.dense_snapshots() {
        return Err(Error::InsufficientData(
            "Lyapunov values need either a matching column or a snapshot at every iteration".into(),
        ));
    }
    Ok(trace
        .snapshots
        .iter()
        .map(|s| lyapunov_value(&s.v, &s.u_prev, &s.u, &s.p_prev, reference, &trace.consts))
        .collect())
}

fn require_minty(reference: &ReferencePoint) -> Result<()> {
    if reference.role != ReferenceRole::Minty {
        return Err(Error::Usage(format!(
            "descent certificates need a Minty reference, got role `{}`",
            reference.role.as_str()
        )));
    }
    Ok(())
}

fn require_consecutive(trace: &RunTrace) -> Result<()> {
    if trace.records.windows(2).any(|w| w[1].k != w[0].k + 1) {
        return Err(Error::InsufficientData("records are not consecutive".into()));
    }
    Ok(())
}

/// `Λᵏ − Λᵏ⁺¹ ≥ ρ(‖wᵏ⁻¹ − wᵏ‖² + ‖pᵏ − qᵏ‖²) − 1e−9(1 + Λᵏ)` for all consecutive
/// records. A violation is reported at the later index `k + 1`.
pub fn check_descent(trace: &RunTrace, reference: &ReferencePoint) -> Result<CertificateReport> {
    check_descent_with_rho(trace, reference, trace.consts.rho)
}

/// [`check_descent`] with an explicit `ρ`.
pub fn check_descent_with_rho(trace: &RunTrace, reference: &ReferencePoint, rho: f64) -> Result<CertificateReport> {
    require_minty(reference)?;
    require_consecutive(trace)?;
    let lam = lyapunov_series(trace, reference)?;
    let mut rep = CertificateReport::new("lyapunov-descent");
    for i in 0..trace.records.len().saturating_sub(1) {
        let r = &trace.records[i];
        let lhs = lam[i] - lam[i + 1];
        let rhs = rho * (r.step_norm.powi(2) + r.dual_gap_norm.powi(2));
        rep.observe(trace.records[i + 1].k, lhs - rhs, DESCENT_TOL * (1.0 + lam[i]));
    }
    Ok(rep)
}

/// `ρ·K·min_{K<k≤2K} ‖wᵏ⁻¹ − wᵏ‖² ≤ Λᴷ⁺¹ + 1e−9` for every dyadic `K` with
/// `2K` inside the trace. `details` carries `(K, √(2K)·min step)`.
pub fn summed_squares_certificate(trace: &RunTrace, reference: &ReferencePoint) -> Result<CertificateReport> {
    summed_squares_with_rho(trace, reference, trace.consts.rho)
}

pub fn summed_squares_with_rho(trace: &RunTrace, reference: &ReferencePoint, rho: f64) -> Result<CertificateReport> {
    require_minty(reference)?;
    require_consecutive(trace)?;
    let first = trace.records.first().map_or(0, |r| r.k);
    let last = trace.iterations();
    if trace.records.len() < 2 || first != 1 {
        return Err(Error::InsufficientData(
            "summed-squares certificate needs records 1..2K for some K >= 1".into(),
        ));
    }
    let lam = lyapunov_series(trace, reference)?;
    let mut rep = CertificateReport::new("summed-squares");
    let mut trend = Vec::new();
    let mut big_k = 1;
    while 2 * big_k <= last {
        // record k sits at index k − 1
        let min_sq = trace.records[big_k..2 * big_k]
            .iter()
            .map(|r| r.step_norm * r.step_norm)
            .fold(f64::INFINITY, f64::min);
        let bound = lam[big_k];
        rep.observe(big_k, bound - rho * big_k as f64 * min_sq, 1e-9);
        trend.push(serde_json::json!([big_k, ((2 * big_k) as f64).sqrt() * min_sq.sqrt()]));
        big_k *= 2;
    }
    rep.details = serde_json::Value::Array(trend);
    Ok(rep)
}

/// The one-step master inequality at the reference:
/// `Λᵏ − Λᵏ⁺¹ ≥ [L(uᵏ, p★) − L(u★, qᵏ)] + ⟨G(uᵏ) − G(u★), uᵏ − u★⟩ + ρ(‖Δw‖² + ‖pᵏ − qᵏ‖²)`
/// with `L(u, p) = ⟨G(u★), u⟩ + J(u) + ⟨p, Θ(u)⟩`. Needs dense snapshots.
pub fn check_master_inequality(
    trace: &RunTrace,
    problem: &VIProblem,
    reference: &ReferencePoint,
) -> Result<CertificateReport> {
    require_consecutive(trace)?;
    if !trace.dense_snapshots() {
        return Err(Error::InsufficientData("master inequality needs dense snapshots".into()));
    }
    let lam = lyapunov_series(trace, reference)?;
    let (us, ps) = (&reference.u, &reference.p);
    let g_star = problem.g.eval(us);
    let lag = |u: &DVector<f64>, p: &DVector<f64>| g_star.dot(u) + problem.j.value(u) + p.dot(&problem.theta.eval(u));
    let rho = trace.consts.rho;
    let mut rep = CertificateReport::new("master-inequality");
    for i in 0..trace.records.len().saturating_sub(1) {
        let s = &trace.snapshots[i];
        let r = &trace.records[i];
        let bracket = lag(&s.u, ps) - lag(us, &s.q);
        let cross = (problem.g.eval(&s.u) - &g_star).dot(&(&s.u - us));
        let rhs = bracket + cross + rho * (r.step_norm.powi(2) + r.dual_gap_norm.powi(2));
        let scale = 1.0 + lam[i] + bracket.abs() + cross.abs();
        rep.observe(trace.records[i + 1].k, lam[i] - lam[i + 1] - rhs, DESCENT_TOL * scale);
    }
    Ok(rep)
}
