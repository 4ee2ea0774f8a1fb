//! Constraint cones and projection onto their duals.

use nalgebra::DVector;

use crate::error::{check_dim, Result};

/// Absolute tolerance for dual-feasibility checks.
pub const DUAL_FEAS_TOL: f64 = 1e-10;

/// The cone `C` in `Θ(u) ∈ −C`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConeSpec {
    /// `C = ℝᵐ₊`, self-dual.
    NonnegOrthant { m: usize },
    /// `C = {0}`, so `C* = ℝᵐ` (equality constraints).
    ZeroCone { m: usize },
}

impl ConeSpec {
    pub fn dim(&self) -> usize {
        match *self {
            ConeSpec::NonnegOrthant { m } | ConeSpec::ZeroCone { m } => m,
        }
    }

    /// Projection `Π` onto the dual cone `C*`.
    pub fn dual_project(&self, y: &DVector<f64>) -> DVector<f64> {
        match self {
            ConeSpec::NonnegOrthant { .. } => y.map(|x| x.max(0.0)),
            ConeSpec::ZeroCone { .. } => y.clone(),
        }
    }

    /// In-place variant of [`ConeSpec::dual_project`].
    pub fn dual_project_mut(&self, y: &mut DVector<f64>) {
        if let ConeSpec::NonnegOrthant { .. } = self {
            y.apply(|x| *x = x.max(0.0));
        }
    }

    /// Whether `p ∈ C*` up to `tol`.
    pub fn in_dual(&self, p: &DVector<f64>, tol: f64) -> bool {
        match self {
            ConeSpec::NonnegOrthant { .. } => p.iter().all(|&x| x >= -tol),
            ConeSpec::ZeroCone { .. } => p.iter().all(|x| x.is_finite()),
        }
    }

    /// Whether `θ ∈ −C` up to `tol`.
    pub fn in_neg_cone(&self, theta: &DVector<f64>, tol: f64) -> bool {
        match self {
            ConeSpec::NonnegOrthant { .. } => theta.iter().all(|&x| x <= tol),
            ConeSpec::ZeroCone { .. } => theta.iter().all(|&x| x.abs() <= tol),
        }
    }

    /// Componentwise violation of `θ ∈ −C`.
    pub fn violation(&self, theta: &DVector<f64>) -> DVector<f64> {
        match self {
            ConeSpec::NonnegOrthant { .. } => theta.map(|x| x.max(0.0)),
            ConeSpec::ZeroCone { .. } => theta.clone(),
        }
    }

    /// `dist(0, −θ + N_{C*}(p))`, the dual block of the KKT mapping.
    pub fn normal_residual(&self, theta: &DVector<f64>, p: &DVector<f64>) -> f64 {
        match self {
            ConeSpec::NonnegOrthant { .. } => theta
                .iter()
                .zip(p.iter())
                .map(|(&t, &pi)| {
                    let d = if pi > 0.0 { t.abs() } else { t.max(0.0) };
                    d * d
                })
                .sum::<f64>()
                .sqrt(),
            ConeSpec::ZeroCone { .. } => theta.norm(),
        }
    }
}

/// Checked projection onto the dual cone.
pub fn project_dual_cone(cone: &ConeSpec, y: &DVector<f64>) -> Result<DVector<f64>> {
    check_dim("project_dual_cone", cone.dim(), y.len())?;
    Ok(cone.dual_project(y))
}
