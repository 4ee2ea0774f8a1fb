//! Sampling check of the Minty primal-dual system at a candidate point.

use nalgebra::DVector;
use serde::Serialize;

use crate::cone::{ConeSpec, DUAL_FEAS_TOL};
use crate::error::{Error, Result};
use crate::problem::{ReferencePoint, VIProblem};
use crate::rng::{streams, Stream};

use super::classify::SAMPLE_WINDOW;

/// Ray lengths for the dual side.
pub const DUAL_SCALES: [f64; 4] = [0.1, 1.0, 10.0, 100.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MintySide {
    Primal,
    Dual,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MintyVerdict {
    pub refuted: bool,
    pub side: Option<MintySide>,
    /// Primal point `u` or dual point `p` violating its inequality.
    pub witness: Option<Vec<f64>>,
    /// Smallest primal slack seen.
    pub primal_margin: f64,
    /// Largest dual value `⟨Θ(u♮), p − p♮⟩` seen.
    pub dual_margin: f64,
    pub samples: usize,
    pub seed: u64,
}

/// `⟨G(u), u − u♮⟩ + J(u) − J(u♮) + ⟨p♮, Θ(u) − Θ(u♮)⟩` with the magnitude of its terms.
pub fn minty_primal_slack(problem: &VIProblem, cand: &ReferencePoint, u: &DVector<f64>) -> (f64, f64) {
    let a = problem.g.eval(u).dot(&(u - &cand.u));
    let (ju, jc) = (problem.j.value(u), problem.j.value(&cand.u));
    let (tu, tc) = (cand.p.dot(&problem.theta.eval(u)), cand.p.dot(&problem.theta.eval(&cand.u)));
    (a + ju - jc + tu - tc, a.abs() + ju.abs() + jc.abs() + tu.abs() + tc.abs())
}

/// Samples `u ∈ U` for the primal inequality and points of `C*` built from
/// scaled coordinate rays and random nonnegative combinations for the dual one.
pub fn verify_minty(
    problem: &VIProblem,
    cand: &ReferencePoint,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<MintyVerdict> {
    let (n, m) = (problem.n, problem.m);
    if cand.u.len() != n || cand.p.len() != m {
        return Err(Error::Dimension {
            context: "verify_minty",
            expected: n,
            got: cand.u.len(),
        });
    }
    if !problem.cone.in_dual(&cand.p, DUAL_FEAS_TOL) {
        return Err(Error::Usage("candidate multiplier is outside the dual cone".into()));
    }
    let mut out = MintyVerdict {
        refuted: false,
        side: None,
        witness: None,
        primal_margin: f64::INFINITY,
        dual_margin: f64::NEG_INFINITY,
        samples: 0,
        seed,
    };

    // dual side first: it is cheap and exact along rays
    let theta_c = problem.theta.eval(&cand.u);
    let mut s = Stream::new(seed, streams::AUX);
    let mut dual_points: Vec<DVector<f64>> = Vec::new();
    for &sc in &DUAL_SCALES {
        for i in 0..m {
            let mut e = DVector::zeros(m);
            e[i] = sc;
            dual_points.push(e.clone());
            dual_points.push(&cand.p + &e);
            if matches!(problem.cone, ConeSpec::ZeroCone { .. }) {
                dual_points.push(&cand.p - &e);
            }
        }
        if m > 0 {
            let two_sided = matches!(problem.cone, ConeSpec::ZeroCone { .. });
            let dir = DVector::from_fn(m, |_, _| if two_sided { 2.0 * s.uniform() - 1.0 } else { s.uniform() });
            dual_points.push(&cand.p + dir * sc);
        }
    }
    for p in &dual_points {
        let val = theta_c.dot(&(p - &cand.p));
        out.samples += 1;
        out.dual_margin = out.dual_margin.max(val);
        let scale = theta_c.abs().dot(&(p - &cand.p).abs());
        if val > tol * (1.0 + scale) && !out.refuted {
            out.refuted = true;
            out.side = Some(MintySide::Dual);
            out.witness = Some(p.as_slice().to_vec());
        }
    }

    let domain: Vec<(f64, f64)> = (0..n).map(|i| problem.feasible.sampling_window(i, SAMPLE_WINDOW)).collect();
    for t in 0..samples {
        let u = if t % 3 == 2 {
            // near the candidate, where a failure is hardest to see
            let r = 10f64.powf(-4.0 * s.uniform());
            DVector::from_fn(n, |i, _| (cand.u[i] + r * (2.0 * s.uniform() - 1.0)).clamp(domain[i].0, domain[i].1))
        } else if t % 3 == 1 {
            DVector::from_fn(n, |i, _| if s.uniform() < 0.5 { domain[i].0 } else { domain[i].1 })
        } else {
            DVector::from_fn(n, |i, _| s.uniform_in(domain[i].0, domain[i].1))
        };
        let (slack, scale) = minty_primal_slack(problem, cand, &u);
        out.samples += 1;
        if !slack.is_finite() {
            continue;
        }
        out.primal_margin = out.primal_margin.min(slack);
        if slack < -tol * (1.0 + scale) && !out.refuted {
            out.refuted = true;
            out.side = Some(MintySide::Primal);
            out.witness = Some(u.as_slice().to_vec());
        }
    }
    Ok(out)
}
