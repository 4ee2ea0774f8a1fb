//! Step-size parameters and the constants derived from them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::VIProblem;

/// Lower end of the admissible extrapolation weight, `(√5 − 1)/2`.
pub const ETA_MIN: f64 = 0.618_033_988_749_894_9;

/// Fraction of `1/τ` used when `γ` is automatic.
pub const GAMMA_FRACTION: f64 = 0.9;

/// Requested parameters; `None` means automatic.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ParamRequest {
    pub eta: Option<f64>,
    pub gamma: Option<f64>,
    pub alpha: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverParams {
    pub eta: f64,
    pub gamma: f64,
    pub alpha: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedConstants {
    pub lipschitz: f64,
    pub tau: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub beta3: f64,
    pub rho: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub sigma: f64,
}

impl DerivedConstants {
    pub fn compute(p: &SolverParams, lipschitz: f64, tau: f64) -> Self {
        let SolverParams { eta, gamma, alpha } = *p;
        let l = lipschitz;
        let beta1 = 1.0 / (2.0 * alpha * (1.0 - eta));
        let beta2 = (gamma * tau * tau + l + tau) / 2.0;
        let beta3 = 1.0 / (2.0 * gamma);
        let rho = [
            eta / (2.0 * alpha * (1.0 - eta).powi(2)),
            tau / 2.0,
            (1.0 - tau * gamma) / (2.0 * gamma),
            1.0 / gamma,
        ]
        .into_iter()
        .fold(f64::INFINITY, f64::min);
        let c1 = 3.0 * (l + gamma * tau * tau).powi(2);
        let c2 = 3.0 / (alpha * alpha);
        let c3 = 3.0 / (gamma * gamma);
        let sigma = c1.max(c2 / (1.0 - eta).powi(2)).max(c3).sqrt();
        DerivedConstants {
            lipschitz,
            tau,
            beta1,
            beta2,
            beta3,
            rho,
            c1,
            c2,
            c3,
            sigma,
        }
    }
}

/// Largest admissible `α` for the given `η, γ, L, τ`.
pub fn max_alpha(eta: f64, gamma: f64, lipschitz: f64, tau: f64) -> f64 {
    1.0 / (2.0 * (gamma * tau * tau + lipschitz + tau) * eta)
}

/// Resolves automatic entries and validates the rest against
/// `η ∈ [(√5−1)/2, 1)`, `γ ∈ (0, 1/τ)`, `α ∈ (0, 1/(2(γτ²+L+τ)η)]`.
///
/// `L` comes from the problem's mapping; it must be set (or estimated) first.
pub fn resolve_params(problem: &VIProblem, req: &ParamRequest) -> Result<(SolverParams, DerivedConstants)> {
    let lipschitz = problem.g.lipschitz.ok_or_else(|| {
        Error::Parameter("Lipschitz constant L of G is unknown; set or estimate it first".into())
    })?;
    resolve_with(lipschitz, problem.theta.tau, req)
}

/// [`resolve_params`] with explicit `L` and `τ`.
pub fn resolve_with(lipschitz: f64, tau: f64, req: &ParamRequest) -> Result<(SolverParams, DerivedConstants)> {
    if !(lipschitz.is_finite() && lipschitz >= 0.0) {
        return Err(Error::Parameter(format!("L must be finite and nonnegative, got {lipschitz}")));
    }
    if !(tau.is_finite() && tau >= 0.0) {
        return Err(Error::Parameter(format!("tau must be finite and nonnegative, got {tau}")));
    }
    let eta = req.eta.unwrap_or(ETA_MIN);
    if !(eta >= ETA_MIN) {
        return Err(Error::Parameter(format!("eta = {eta} violates eta >= (sqrt(5)-1)/2")));
    }
    if !(eta < 1.0) {
        return Err(Error::Parameter(format!("eta = {eta} violates eta < 1")));
    }
    // with τ = 0 every γ > 0 is admissible; 1 is used as the automatic value
    let gamma = req
        .gamma
        .unwrap_or(if tau > 0.0 { GAMMA_FRACTION / tau } else { 1.0 });
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::Parameter(format!("gamma = {gamma} violates gamma > 0")));
    }
    if tau > 0.0 && !(gamma * tau < 1.0) {
        return Err(Error::Parameter(format!("gamma = {gamma} violates gamma < 1/tau = {}", 1.0 / tau)));
    }
    let amax = max_alpha(eta, gamma, lipschitz, tau);
    // L = τ = 0 leaves α unbounded; 1 is used as the automatic value
    let alpha = req.alpha.unwrap_or(if amax.is_finite() { amax } else { 1.0 });
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::Parameter(format!("alpha = {alpha} violates alpha > 0")));
    }
    if alpha > amax {
        return Err(Error::Parameter(format!(
            "alpha = {alpha} violates alpha <= 1/(2(gamma*tau^2+L+tau)eta) = {amax}"
        )));
    }
    let p = SolverParams { eta, gamma, alpha };
    Ok((p, DerivedConstants::compute(&p, lipschitz, tau)))
}
