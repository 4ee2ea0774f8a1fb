//! Weighted distance to a candidate solution set and log-linear rate fits.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::certify::report::CertificateReport;
use crate::certify::trace::RunTrace;
use crate::error::{Error, Result};
use crate::problem::ReferencePoint;
use crate::solver::params::DerivedConstants;

/// Fraction of the series dropped as the initial transient.
pub const DEFAULT_TRIM: f64 = 0.2;
/// Floor applied by [`fit_linear_rate_floored`].
pub const SERIES_FLOOR: f64 = 1e-16;

/// `min over refs of β₁‖v − u‖² + β₃‖p_prev − p‖²`, with `z = (v, p_prev)`.
pub fn weighted_distance(
    v: &DVector<f64>,
    p_prev: &DVector<f64>,
    refs: &[ReferencePoint],
    consts: &DerivedConstants,
) -> Result<f64> {
    if refs.is_empty() {
        return Err(Error::Usage("weighted distance needs at least one reference".into()));
    }
    Ok(refs
        .iter()
        .map(|r| consts.beta1 * (v - &r.u).norm_squared() + consts.beta3 * (p_prev - &r.p).norm_squared())
        .fold(f64::INFINITY, f64::min))
}

/// `weighted_distance(zᵏ) + β₂‖uᵏ⁻¹ − uᵏ‖²` for every snapshot, as `(k, value)`.
pub fn rate_potential(trace: &RunTrace, refs: &[ReferencePoint]) -> Result<Vec<(usize, f64)>> {
    trace
        .snapshots
        .iter()
        .map(|s| {
            let d = weighted_distance(&s.v, &s.p_prev, refs, &trace.consts)?;
            Ok((s.k, d + trace.consts.beta2 * (&s.u_prev - &s.u).norm_squared()))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    /// `exp(slope)` of the least-squares line through `log(series)`.
    pub rate: f64,
    pub r_squared: f64,
    /// First index used after trimming.
    pub start: usize,
    pub points: usize,
    /// Whether any entry was raised to the floor.
    pub floored: bool,
}

/// Fits `log(series_k) ≈ a + k·log(rate)` after dropping the first
/// `trim` fraction. Entries must be positive and finite; at least 10 are needed.
pub fn fit_linear_rate(series: &[f64], trim: f64) -> Result<RateFit> {
    if let Some(x) = series.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
        return Err(Error::Usage(format!("rate fit needs positive finite entries, found {x}")));
    }
    fit(series, trim, false)
}

/// [`fit_linear_rate`] with entries below `1e−16` raised to it and flagged.
pub fn fit_linear_rate_floored(series: &[f64], trim: f64) -> Result<RateFit> {
    if series.iter().any(|x| x.is_nan()) {
        return Err(Error::Usage("rate fit series contains NaN".into()));
    }
    let floored = series.iter().any(|&x| x < SERIES_FLOOR);
    let s: Vec<f64> = series.iter().map(|&x| x.max(SERIES_FLOOR)).collect();
    fit(&s, trim, floored)
}

fn fit(series: &[f64], trim: f64, floored: bool) -> Result<RateFit> {
    if series.len() < 10 {
        return Err(Error::InsufficientData(format!(
            "rate fit needs at least 10 points, got {}",
            series.len()
        )));
    }
    if !(0.0..1.0).contains(&trim) {
        return Err(Error::Usage(format!("trim fraction must be in [0, 1), got {trim}")));
    }
    let start = (series.len() as f64 * trim).floor() as usize;
    let ys: Vec<f64> = series[start..].iter().map(|x| x.ln()).collect();
    let n = ys.len() as f64;
    let xs: Vec<f64> = (start..series.len()).map(|k| k as f64).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - (my + slope * (x - mx))).powi(2))
        .sum();
    // a flat series is fitted exactly
    let r_squared = if syy <= f64::EPSILON * f64::EPSILON * n { 1.0 } else { 1.0 - ss_res / syy };
    Ok(RateFit {
        rate: slope.exp(),
        r_squared,
        start,
        points: ys.len(),
        floored,
    })
}

/// `series[i+1] ≤ series[i] + tol·(1 + series[i])` for all `i`.
pub fn check_nonincreasing(name: &str, series: &[(usize, f64)], tol: f64) -> CertificateReport {
    let mut rep = CertificateReport::new(name);
    for w in series.windows(2) {
        rep.observe(w[1].0, w[0].1 - w[1].1, tol * (1.0 + w[0].1));
    }
    rep
}
