//! The augmented-Lagrangian term `φ(θ, p) = max_{q ∈ C*} ⟨q, θ⟩ − ‖q − p‖²/(2γ)`.

use nalgebra::DVector;

use crate::cone::{ConeSpec, DUAL_FEAS_TOL};
use crate::error::{check_dim, Error, Result};

fn check(theta: &DVector<f64>, p: &DVector<f64>, gamma: f64, cone: &ConeSpec) -> Result<()> {
    if !(gamma > 0.0) {
        return Err(Error::Parameter(format!("gamma must be positive, got {gamma}")));
    }
    check_dim("phi: theta", cone.dim(), theta.len())?;
    check_dim("phi: p", cone.dim(), p.len())?;
    if !cone.in_dual(p, DUAL_FEAS_TOL) {
        return Err(Error::Usage("p must lie in the dual cone".into()));
    }
    Ok(())
}

/// `(1/2γ)(‖Π(p + γθ)‖² − ‖p‖²)`.
pub fn eval_phi(theta: &DVector<f64>, p: &DVector<f64>, gamma: f64, cone: &ConeSpec) -> Result<f64> {
    check(theta, p, gamma, cone)?;
    let q = cone.dual_project(&(p + theta * gamma));
    Ok((q.norm_squared() - p.norm_squared()) / (2.0 * gamma))
}

/// `∇_θ φ = Π(p + γθ)`.
pub fn grad_theta(
    theta: &DVector<f64>,
    p: &DVector<f64>,
    gamma: f64,
    cone: &ConeSpec,
) -> Result<DVector<f64>> {
    check(theta, p, gamma, cone)?;
    Ok(cone.dual_project(&(p + theta * gamma)))
}

/// `∇_p φ = (Π(p + γθ) − p)/γ`.
pub fn grad_p(theta: &DVector<f64>, p: &DVector<f64>, gamma: f64, cone: &ConeSpec) -> Result<DVector<f64>> {
    check(theta, p, gamma, cone)?;
    Ok((cone.dual_project(&(p + theta * gamma)) - p) / gamma)
}
