//! Oracles written from the problem definitions, independent of the library's
//! own evaluation code.

use alavi_core::{ConeSpec, ConstraintForm, FeasibleSet, MappingKind, ProxFunction, VIProblem};
use nalgebra::{DMatrix, DVector};

/// `G(u) = M(u)(u − ¼·1)`, `M = t₁t₁ᵀ + t₂t₂ᵀ`, `t₁ = A cos u`, `t₂ = B/(1 + e^{−u})`.
pub fn ncvi1_map(a: &DMatrix<f64>, b: &DMatrix<f64>, u: &[f64]) -> Vec<f64> {
    let n = u.len();
    let mut t1 = vec![0.0; n];
    let mut t2 = vec![0.0; n];
    for i in 0..n {
        for j in 0..n {
            t1[i] += a[(i, j)] * u[j].cos();
            t2[i] += b[(i, j)] / (1.0 + (-u[j]).exp());
        }
    }
    let w: Vec<f64> = u.iter().map(|x| x - 0.25).collect();
    let d1: f64 = t1.iter().zip(&w).map(|(x, y)| x * y).sum();
    let d2: f64 = t2.iter().zip(&w).map(|(x, y)| x * y).sum();
    (0..n).map(|i| t1[i] * d1 + t2[i] * d2).collect()
}

/// `G(u)ᵢ = u²_{n−1−i}(uᵢ − u♯ᵢ)`.
pub fn ncvi2_map(sharp: &[f64], u: &[f64]) -> Vec<f64> {
    let n = u.len();
    (0..n).map(|i| u[n - 1 - i].powi(2) * (u[i] - sharp[i])).collect()
}

pub fn map_by_hand(problem: &VIProblem, u: &[f64]) -> Vec<f64> {
    match &problem.g.kind {
        MappingKind::NcviOne { a, b } => ncvi1_map(a, b, u),
        MappingKind::NcviTwo { sharp } => ncvi2_map(sharp.as_slice(), u),
        MappingKind::Affine { q, c } => (0..u.len())
            .map(|i| c[i] + (0..u.len()).map(|j| q[(i, j)] * u[j]).sum::<f64>())
            .collect(),
        MappingKind::Zero { n } => vec![0.0; *n],
        MappingKind::Custom { .. } => panic!("no hand formula for custom maps"),
    }
}

fn affine_parts(problem: &VIProblem) -> (&DMatrix<f64>, &DVector<f64>) {
    match &problem.theta.form {
        ConstraintForm::Affine { a, b } => (a, b),
        _ => panic!("oracle handles affine constraints only"),
    }
}

fn box_bounds(problem: &VIProblem, i: usize) -> (f64, f64) {
    match &problem.feasible {
        FeasibleSet::Box { lo, hi } => (lo[i], hi[i]),
        FeasibleSet::WholeSpace { .. } => (f64::NEG_INFINITY, f64::INFINITY),
    }
}

/// `∂fᵢ(x)` as an interval.
fn j_subdiff(j: &ProxFunction, i: usize, x: f64) -> (f64, f64) {
    match j {
        ProxFunction::Zero { .. } => (0.0, 0.0),
        ProxFunction::WeightedL1 { center, weight } => {
            if x > center[i] {
                (*weight, *weight)
            } else if x < center[i] {
                (-weight, -weight)
            } else {
                (-weight, *weight)
            }
        }
        ProxFunction::Linear { g } => (g[i], g[i]),
        ProxFunction::BoxIndicator { lo, hi } => (
            if x <= lo[i] { f64::NEG_INFINITY } else { 0.0 },
            if x >= hi[i] { f64::INFINITY } else { 0.0 },
        ),
        ProxFunction::CustomSeparable { .. } => panic!("no hand subdifferential for custom terms"),
    }
}

/// `dist(0, G(u) + ∂J(u) + Aᵀp + N_U(u)) + ‖dist(Au − b, −C)‖`.
pub fn kkt_by_hand(problem: &VIProblem, u: &[f64], p: &[f64]) -> f64 {
    let (a, b) = affine_parts(problem);
    let g = map_by_hand(problem, u);
    let mut stat = 0.0;
    for i in 0..u.len() {
        let r = g[i] + (0..p.len()).map(|k| a[(k, i)] * p[k]).sum::<f64>();
        let (jl, jh) = j_subdiff(&problem.j, i, u[i]);
        let (lo, hi) = box_bounds(problem, i);
        let nl = if u[i] <= lo { f64::NEG_INFINITY } else { 0.0 };
        let nh = if u[i] >= hi { f64::INFINITY } else { 0.0 };
        // distance from −r to [jl + nl, jh + nh]
        let (l, h) = (jl + nl, jh + nh);
        let d = if -r < l {
            l + r
        } else if -r > h {
            -r - h
        } else {
            0.0
        };
        stat += d * d;
    }
    let mut infeas = 0.0;
    for k in 0..p.len() {
        let t = (0..u.len()).map(|i| a[(k, i)] * u[i]).sum::<f64>() - b[k];
        let v = match problem.cone {
            ConeSpec::NonnegOrthant { .. } => t.max(0.0),
            ConeSpec::ZeroCone { .. } => t.abs(),
        };
        infeas += v * v;
    }
    stat.sqrt() + infeas.sqrt()
}

/// `Θ(u) = Au − b`.
pub fn theta_by_hand(problem: &VIProblem, u: &[f64]) -> Vec<f64> {
    let (a, b) = affine_parts(problem);
    (0..b.len())
        .map(|k| (0..u.len()).map(|i| a[(k, i)] * u[i]).sum::<f64>() - b[k])
        .collect()
}

/// `fᵢ(x)` for one coordinate of a separable `J`.
pub fn j_term_by_hand(j: &ProxFunction, i: usize, x: f64) -> f64 {
    match j {
        ProxFunction::Zero { .. } => 0.0,
        ProxFunction::WeightedL1 { center, weight } => weight * (x - center[i]).abs(),
        ProxFunction::Linear { g } => g[i] * x,
        ProxFunction::BoxIndicator { lo, hi } => {
            if x >= lo[i] && x <= hi[i] {
                0.0
            } else {
                f64::INFINITY
            }
        }
        ProxFunction::CustomSeparable { .. } => panic!("no hand value for custom terms"),
    }
}

pub fn j_by_hand(j: &ProxFunction, u: &[f64]) -> f64 {
    u.iter().enumerate().map(|(i, &x)| j_term_by_hand(j, i, x)).sum()
}

pub fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

pub fn sq_dist(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum()
}

/// Minimizer of a unimodal `f` on `[a, b]` by golden-section search.
pub fn golden(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() <= 1e-13 * (1.0 + a.abs() + b.abs()) {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    (a + b) / 2.0
}

fn interval_dist(x: f64, lo: f64, hi: f64) -> f64 {
    if x < lo {
        lo - x
    } else if x > hi {
        x - hi
    } else {
        0.0
    }
}

/// Box-and-budget KKT error:
/// `dist(0, G(u) + p·1 + N_[0,1]ⁿ(u)) + max(0, 1ᵀu − n/2)`.
pub fn ncvi1_kkt(a: &DMatrix<f64>, b: &DMatrix<f64>, u: &[f64], p: f64) -> f64 {
    let n = u.len();
    let g = ncvi1_map(a, b, u);
    let mut stat = 0.0;
    for i in 0..n {
        let r = g[i] + p;
        let lo = if u[i] <= 0.0 { f64::NEG_INFINITY } else { 0.0 };
        let hi = if u[i] >= 1.0 { f64::INFINITY } else { 0.0 };
        stat += interval_dist(-r, lo, hi).powi(2);
    }
    let budget = u.iter().sum::<f64>() - n as f64 / 2.0;
    stat.sqrt() + budget.max(0.0)
}

/// Polyhedral KKT error with `J = ‖u − 1‖₁`, `U = [−10, 10]ⁿ`, `b = A·½1`:
/// `dist(0, G(u) + ∂J(u) + Aᵀp + N_U(u)) + ‖max(0, Au − b)‖`.
pub fn ncvi2_kkt(sharp: &[f64], a: &DMatrix<f64>, u: &[f64], p: &[f64]) -> f64 {
    let (m, n) = a.shape();
    let g = ncvi2_map(sharp, u);
    let mut stat = 0.0;
    for i in 0..n {
        let r = g[i] + (0..m).map(|k| a[(k, i)] * p[k]).sum::<f64>();
        let (mut lo, mut hi) = if u[i] > 1.0 {
            (1.0, 1.0)
        } else if u[i] < 1.0 {
            (-1.0, -1.0)
        } else {
            (-1.0, 1.0)
        };
        if u[i] <= -10.0 {
            lo = f64::NEG_INFINITY;
        }
        if u[i] >= 10.0 {
            hi = f64::INFINITY;
        }
        stat += interval_dist(-r, lo, hi).powi(2);
    }
    let mut infeas = 0.0;
    for k in 0..m {
        let row: f64 = (0..n).map(|i| a[(k, i)] * (u[i] - 0.5)).sum();
        infeas += row.max(0.0).powi(2);
    }
    stat.sqrt() + infeas.sqrt()
}

#[derive(Debug, Clone, Copy)]
pub struct HandConstants {
    pub beta1: f64,
    pub beta2: f64,
    pub beta3: f64,
    pub rho: f64,
    pub sigma: f64,
}

pub fn hand_constants(eta: f64, gamma: f64, alpha: f64, l: f64, tau: f64) -> HandConstants {
    let rho = (eta / (2.0 * alpha * (1.0 - eta) * (1.0 - eta)))
        .min(tau / 2.0)
        .min((1.0 - tau * gamma) / (2.0 * gamma))
        .min(1.0 / gamma);
    let c1 = 3.0 * (l + gamma * tau * tau) * (l + gamma * tau * tau);
    let c2 = 3.0 / (alpha * alpha);
    let c3 = 3.0 / (gamma * gamma);
    HandConstants {
        beta1: 1.0 / (2.0 * alpha * (1.0 - eta)),
        beta2: (gamma * tau * tau + l + tau) / 2.0,
        beta3: 1.0 / (2.0 * gamma),
        rho,
        sigma: c1.max(c2 / ((1.0 - eta) * (1.0 - eta))).max(c3).sqrt(),
    }
}

/// Least-squares line through `(k, ln yₖ)`: returns `(exp(slope), R²)`.
pub fn log_linear_fit(ys: &[f64]) -> (f64, f64) {
    let n = ys.len() as f64;
    let xs: Vec<f64> = (0..ys.len()).map(|i| i as f64).collect();
    let ls: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ls.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ls).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let syy: f64 = ls.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    (slope.exp(), r2)
}
