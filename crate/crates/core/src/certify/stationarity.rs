//! The bound `dist(0, H(uᵏ, pᵏ)) ≤ σ‖wᵏ⁻¹ − wᵏ‖` applied to the recorded KKT value.

use crate::certify::report::CertificateReport;
use crate::certify::trace::RunTrace;
use crate::solver::params::DerivedConstants;

pub const STATIONARITY_TOL: f64 = 1e-8;

/// `σ‖wᵏ⁻¹ − wᵏ‖` per record, and a report checking
/// `kkt(uᵏ, pᵏ) ≤ σ‖wᵏ⁻¹ − wᵏ‖ + 1e−8` for `k ≥ 2`.
pub fn stationarity_bound(trace: &RunTrace, consts: &DerivedConstants) -> (Vec<f64>, CertificateReport) {
    let series: Vec<f64> = trace.records.iter().map(|r| consts.sigma * r.step_norm).collect();
    let mut rep = CertificateReport::new("stationarity-bound");
    for (r, b) in trace.records.iter().zip(&series) {
        if r.k >= 2 {
            rep.observe(r.k, b - r.kkt_residual, STATIONARITY_TOL);
        }
    }
    (series, rep)
}

/// `σ² = max{c₁, c₂/(1 − η)², c₃}` recomputed from the constants.
pub fn sigma_squared(consts: &DerivedConstants, eta: f64) -> f64 {
    consts.c1.max(consts.c2 / (1.0 - eta).powi(2)).max(consts.c3)
}
