//! Running averages `ũ_t = (1/t)Σ uᵏ`, `p̃_t = (1/t)Σ qᵏ` and the gap
//! `Ψ(u, p, ζ, λ) = ⟨G(ζ), u − ζ⟩ + J(u) − J(ζ) + ⟨λ, Θ(u)⟩ − ⟨p, Θ(ζ)⟩`.

use nalgebra::DVector;

use crate::certify::lyapunov::lyapunov_series;
use crate::certify::report::CertificateReport;
use crate::certify::trace::RunTrace;
use crate::cone::DUAL_FEAS_TOL;
use crate::error::{check_dim, Error, Result};
use crate::problem::{ReferencePoint, VIProblem};

fn dense_prefix(trace: &RunTrace, t: usize) -> Result<()> {
    if t == 0 {
        return Err(Error::Usage("averaging window must be at least 1".into()));
    }
    if trace.snapshots.len() < t || (0..t).any(|i| trace.snapshots[i].k != i + 1) {
        return Err(Error::InsufficientData(format!(
            "ergodic averages need snapshots 1..={t}"
        )));
    }
    Ok(())
}

/// Means of `uᵏ` and `qᵏ` over `k = 1..t`.
pub fn ergodic_averages(trace: &RunTrace, t: usize) -> Result<(DVector<f64>, DVector<f64>)> {
    dense_prefix(trace, t)?;
    let first = &trace.snapshots[0];
    let mut su = DVector::zeros(first.u.len());
    let mut sq = DVector::zeros(first.q.len());
    for s in &trace.snapshots[..t] {
        su += &s.u;
        sq += &s.q;
    }
    Ok((su / t as f64, sq / t as f64))
}

/// `Ψ(u_avg, p_avg, ζ, λ)`; `ζ` must lie in `U` and `λ` in `C*`.
pub fn gap_certificate(
    u_avg: &DVector<f64>,
    p_avg: &DVector<f64>,
    zeta: &DVector<f64>,
    lam: &DVector<f64>,
    problem: &VIProblem,
) -> Result<f64> {
    check_dim("gap: u", problem.n, u_avg.len())?;
    check_dim("gap: zeta", problem.n, zeta.len())?;
    check_dim("gap: p", problem.m, p_avg.len())?;
    check_dim("gap: lambda", problem.m, lam.len())?;
    if !problem.feasible.contains(zeta, DUAL_FEAS_TOL) {
        return Err(Error::Usage("zeta must lie in U".into()));
    }
    if !problem.cone.in_dual(lam, DUAL_FEAS_TOL) {
        return Err(Error::Usage("lambda must lie in the dual cone".into()));
    }
    Ok(problem.gap_function(u_avg, p_avg, zeta, lam))
}

/// `Ψ(ũ_t, p̃_t, u★, p★) ≤ Λ¹(u★, p★)/t` for `t = 1..=t_max`, with streaming means.
pub fn check_ergodic_gap(
    trace: &RunTrace,
    problem: &VIProblem,
    reference: &ReferencePoint,
    t_max: usize,
) -> Result<CertificateReport> {
    dense_prefix(trace, t_max)?;
    let lam1 = lyapunov_series(trace, reference)?[0];
    let mut rep = CertificateReport::new("ergodic-gap");
    let mut su = DVector::zeros(problem.n);
    let mut sq = DVector::zeros(problem.m);
    let mut series = Vec::with_capacity(t_max);
    for t in 1..=t_max {
        let s = &trace.snapshots[t - 1];
        su += &s.u;
        sq += &s.q;
        let tf = t as f64;
        let psi = gap_certificate(&(&su / tf), &(&sq / tf), &reference.u, &reference.p, problem)?;
        let bound = lam1 / tf;
        rep.observe(t, bound - psi, 1e-12 * (1.0 + lam1));
        series.push(serde_json::json!([t, psi, bound]));
    }
    rep.details = serde_json::Value::Array(series);
    Ok(rep)
}
