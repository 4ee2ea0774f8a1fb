//! KKT residuals.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::cone::ConeSpec;
use crate::error::{check_dim, Result};
use crate::problem::VIProblem;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KktResidual {
    /// `stationarity + infeasibility`, the metric used for stopping.
    pub value: f64,
    /// `dist(0, G(u) + ∂J(u) + ∇Θ(u)ᵀp + N_U(u))`.
    pub stationarity: f64,
    /// `‖max(0, Θ(u))‖` for the orthant, `‖Θ(u)‖` for the zero cone.
    pub infeasibility: f64,
    /// `|⟨p, Θ(u)⟩|`, reported but not summed into `value`.
    pub complementarity: f64,
    /// `dist(0, −Θ(u) + N_{C*}(p))`.
    pub dual_residual: f64,
    /// False when some term of `J` cannot report its subdifferential and the
    /// stationarity part fell back to the natural-map residual.
    pub exact: bool,
}

impl KktResidual {
    /// `dist(0, H(u, p))`, the full KKT mapping distance.
    pub fn full_distance(&self) -> f64 {
        self.stationarity.hypot(self.dual_residual)
    }
}

/// Distance from `x` to the interval `[lo, hi]`.
#[inline]
pub fn dist_to_interval(x: f64, lo: f64, hi: f64) -> f64 {
    if x < lo {
        lo - x
    } else if x > hi {
        x - hi
    } else {
        0.0
    }
}

pub fn kkt_residual(u: &DVector<f64>, p: &DVector<f64>, problem: &VIProblem) -> Result<KktResidual> {
    check_dim("kkt_residual: u", problem.n, u.len())?;
    check_dim("kkt_residual: p", problem.m, p.len())?;
    let g = problem.g.eval(u);
    let theta = problem.theta.eval(u);
    Ok(kkt_from_parts(problem, u, p, &g, &theta))
}

/// [`kkt_residual`] with `G(u)` and `Θ(u)` already evaluated.
pub fn kkt_from_parts(
    problem: &VIProblem,
    u: &DVector<f64>,
    p: &DVector<f64>,
    g_u: &DVector<f64>,
    theta_u: &DVector<f64>,
) -> KktResidual {
    let grad = g_u + problem.theta.jacobian_t_mul(u, p);
    let mut exact = true;
    let mut acc = 0.0;
    for i in 0..u.len() {
        let Some((jl, jh)) = problem.j.term_subdiff(i, u[i]) else {
            exact = false;
            break;
        };
        let (nl, nh) = problem.feasible.normal_interval(i, u[i]);
        let d = dist_to_interval(-grad[i], jl + nl, jh + nh);
        acc += d * d;
    }
    let stationarity = if exact {
        acc.sqrt()
    } else {
        // natural map: ‖u − P_U(prox_J(u − grad))‖
        let step = u - &grad;
        let r = DVector::from_fn(u.len(), |i, _| {
            let (lo, hi) = problem.feasible.bounds(i);
            u[i] - problem.j.term_prox(i, step[i], 1.0).clamp(lo, hi)
        });
        r.norm()
    };
    let infeasibility = problem.cone.violation(theta_u).norm();
    let complementarity = match problem.cone {
        ConeSpec::NonnegOrthant { .. } => p.dot(theta_u).abs(),
        ConeSpec::ZeroCone { .. } => 0.0,
    };
    KktResidual {
        value: stationarity + infeasibility,
        stationarity,
        infeasibility,
        complementarity,
        dual_residual: problem.cone.normal_residual(theta_u, p),
        exact,
    }
}
