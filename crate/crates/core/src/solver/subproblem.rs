//! The primal step
//! `argmin_{u∈U} ⟨g, u⟩ + J(u) + ⟨q, Θ(u)⟩ + ‖u − v‖²/(2α)`.

use nalgebra::{DMatrix, DVector};

use crate::constraint::ConstraintForm;
use crate::error::{check_dim, Error, Result};
use crate::problem::VIProblem;

/// Cap on proximal-gradient steps for the general-`Θ` subproblem.
pub const INNER_MAX_ITERS: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Closed form when available, inner iterations otherwise.
    Auto,
    ClosedForm,
    InnerIterative,
}

/// How the constraint term enters the subproblem.
#[derive(Debug, Clone, Copy)]
pub enum ConstraintTerm<'a> {
    /// `⟨q, Θ(u)⟩` as is.
    Exact,
    /// `⟨q, ∇Θ(ū)·u⟩` with the Jacobian frozen at `ū`.
    Linearized(&'a DVector<f64>),
}

#[derive(Debug, Clone, Copy)]
pub struct InnerTolerance {
    pub tol: f64,
    /// Outer iteration, for error reporting.
    pub iteration: usize,
}

/// Separable minimizer `clamp(prox_J(x, α))`, coordinatewise.
///
/// For a 1-D strictly convex objective the minimizer over an interval is the
/// clamp of the unconstrained one, so this is exact for any separable `J`.
fn separable_solve(problem: &VIProblem, x: &DVector<f64>, alpha: f64) -> DVector<f64> {
    DVector::from_fn(x.len(), |i, _| {
        let (lo, hi) = problem.feasible.bounds(i);
        problem.j.term_prox(i, x[i], alpha).clamp(lo, hi)
    })
}

/// Solves the primal subproblem given `g_at_uk = G(uᵏ)`.
#[allow(clippy::too_many_arguments)]
pub fn solve_primal_subproblem(
    problem: &VIProblem,
    g_at_uk: &DVector<f64>,
    q: &DVector<f64>,
    v: &DVector<f64>,
    alpha: f64,
    strategy: Strategy,
    term: ConstraintTerm<'_>,
    inner: InnerTolerance,
) -> Result<DVector<f64>> {
    check_dim("subproblem: g", problem.n, g_at_uk.len())?;
    check_dim("subproblem: v", problem.n, v.len())?;
    check_dim("subproblem: q", problem.m, q.len())?;
    if !(alpha > 0.0) {
        return Err(Error::Parameter(format!("alpha must be positive, got {alpha}")));
    }
    let closed_form_ok = problem.theta.is_affine() || matches!(term, ConstraintTerm::Linearized(_));
    match strategy {
        Strategy::ClosedForm if !closed_form_ok => Err(Error::Capability(
            "closed-form subproblem needs an affine or linearized constraint map".into(),
        )),
        Strategy::ClosedForm | Strategy::Auto if closed_form_ok => {
            let atq = match (&problem.theta.form, term) {
                (ConstraintForm::Affine { a, .. }, _) => a.tr_mul(q),
                (_, ConstraintTerm::Linearized(ubar)) => problem.theta.jacobian_t_mul(ubar, q),
                _ => unreachable!(),
            };
            let x = v - (g_at_uk + atq) * alpha;
            Ok(separable_solve(problem, &x, alpha))
        }
        _ => inner_solve(problem, g_at_uk, q, v, alpha, inner),
    }
}

/// Proximal gradient with backtracking on the smooth part
/// `s(u) = ⟨g, u⟩ + ⟨q, Θ(u)⟩ + ‖u − v‖²/(2α)`; `J` and `U` go through the prox.
fn inner_solve(
    problem: &VIProblem,
    g: &DVector<f64>,
    q: &DVector<f64>,
    v: &DVector<f64>,
    alpha: f64,
    inner: InnerTolerance,
) -> Result<DVector<f64>> {
    let smooth = |u: &DVector<f64>| g.dot(u) + q.dot(&problem.theta.eval(u)) + (u - v).norm_squared() / (2.0 * alpha);
    let grad = |u: &DVector<f64>| g + problem.theta.jacobian_t_mul(u, q) + (u - v) / alpha;
    let mut u = problem.feasible.project(v);
    let mut t = alpha;
    let mut residual = f64::INFINITY;
    for it in 0..INNER_MAX_ITERS {
        let gu = grad(&u);
        let su = smooth(&u);
        let next = loop {
            let cand = separable_solve(problem, &(&u - &gu * t), t);
            let d = &cand - &u;
            if smooth(&cand) <= su + gu.dot(&d) + d.norm_squared() / (2.0 * t) + 1e-15 * su.abs().max(1.0)
                || t < 1e-300
            {
                break cand;
            }
            t *= 0.5;
        };
        // norm of the prox-gradient mapping
        residual = (&next - &u).norm() / t;
        u = next;
        if !residual.is_finite() {
            break;
        }
        if residual <= inner.tol {
            return Ok(u);
        }
        // let the step grow back slowly
        if it % 10 == 9 {
            t = (t * 2.0).min(alpha);
        }
    }
    Err(Error::InnerConvergence {
        iteration: inner.iteration,
        inner_iters: INNER_MAX_ITERS,
        residual,
    })
}

/// Jacobian-frozen coefficient `∇Θ(ū)ᵀq`, exposed for tests.
pub fn linearized_coefficient(problem: &VIProblem, ubar: &DVector<f64>, q: &DVector<f64>) -> DVector<f64> {
    let jac: DMatrix<f64> = problem.theta.jacobian(ubar);
    jac.tr_mul(q)
}
