//! Polyhedral family: `G(u) = rev(u)∘² ∘ (u − u♯)`, `J(u) = ‖u − 1‖₁` on
//! `{u ∈ [−10,10]ⁿ : Au ≤ b}` with `b = A·½1`, where `(u♯, p♯)` solves
//! `min_Γ J`.

use nalgebra::{DMatrix, DVector};

use crate::certify::trace::RunStatus;
use crate::cone::ConeSpec;
use crate::constraint::{ConstraintMap, TauRule};
use crate::error::{Error, Result};
use crate::feasible::FeasibleSet;
use crate::mapping::{MappingKind, MappingSpec};
use crate::problem::{ReferencePoint, ReferenceRole, VIProblem};
use crate::prox::ProxFunction;
use crate::rng::{streams, Stream};
use crate::solver::engine::{alavi_run, RunOptions, StopRule};
use crate::solver::lipschitz::estimate_lipschitz;
use crate::solver::params::{resolve_params, ParamRequest};

use super::{normal_matrix, LIPSCHITZ_SAMPLES};

pub const BOX: f64 = 10.0;
/// KKT tolerance of the sharp-point solve.
pub const SHARP_TOL: f64 = 1e-9;
pub const SHARP_MAX_ITERS: usize = 2_000_000;

/// Rows for dimension `n`: `n/50`, or `max(1, round(n/50))` when 50 ∤ n.
pub fn default_rows(n: usize) -> usize {
    if n % 50 == 0 && n > 0 {
        n / 50
    } else {
        ((n as f64 / 50.0).round() as usize).max(1)
    }
}

pub fn gen_ncvi2(n: usize, seed: u64) -> Result<VIProblem> {
    gen_ncvi2_with_rows(n, default_rows(n), seed)
}

pub fn gen_ncvi2_with_rows(n: usize, m: usize, seed: u64) -> Result<VIProblem> {
    if n < 2 || m == 0 {
        return Err(Error::Usage(format!("ncvi2 needs n >= 2 and m >= 1, got n={n}, m={m}")));
    }
    let a = normal_matrix(&mut Stream::new(seed, streams::A), m, n);
    ncvi2_from_matrix(a, None, seed)
}

/// Builds the instance from an explicit constraint matrix.
pub fn ncvi2_from_matrix(a: DMatrix<f64>, lipschitz: Option<f64>, seed: u64) -> Result<VIProblem> {
    let n = a.ncols();
    let b = &a * DVector::from_element(n, 0.5);
    let (sharp_u, sharp_p) = compute_sharp_point(BOX, &a, &b)?;
    let domain = FeasibleSet::uniform_box(n, -BOX, BOX)?;
    let mut g = MappingSpec::new(MappingKind::NcviTwo { sharp: sharp_u.clone() });
    let l = match lipschitz {
        Some(l) => l,
        None => estimate_lipschitz(&g, &domain, LIPSCHITZ_SAMPLES, seed)?,
    };
    g = g.with_lipschitz(l);
    let m = a.nrows();
    let theta = ConstraintMap::affine(a, b, TauRule::Frobenius)?;
    let prob = VIProblem::new(
        g,
        ProxFunction::WeightedL1 {
            center: DVector::from_element(n, 1.0),
            weight: 1.0,
        },
        theta,
        ConeSpec::NonnegOrthant { m },
        domain,
    )?;
    // the sharp solve stops at a KKT tolerance, so feasibility holds only to it
    prob.with_reference_tol(ReferencePoint::new(sharp_u, sharp_p, ReferenceRole::Minty), SHARP_TOL)
        .map_err(|e| Error::Generation(format!("sharp point rejected: {e}")))
}

/// Solves `min ‖u − 1‖₁` over `{u ∈ [−box, box]ⁿ : Au ≤ b}` by running the
/// solver with `G ≡ 0` from `u = 1` down to KKT error `1e−9`.
pub fn compute_sharp_point(half_width: f64, a: &DMatrix<f64>, b: &DVector<f64>) -> Result<(DVector<f64>, DVector<f64>)> {
    let (m, n) = a.shape();
    if b.len() != m {
        return Err(Error::Dimension {
            context: "compute_sharp_point",
            expected: m,
            got: b.len(),
        });
    }
    let prob = VIProblem::new(
        MappingSpec::new(MappingKind::Zero { n }).with_lipschitz(0.0),
        ProxFunction::WeightedL1 {
            center: DVector::from_element(n, 1.0),
            weight: 1.0,
        },
        ConstraintMap::affine(a.clone(), b.clone(), TauRule::Frobenius)?,
        ConeSpec::NonnegOrthant { m },
        FeasibleSet::uniform_box(n, -half_width, half_width)?,
    )?;
    let (params, consts) = resolve_params(&prob, &ParamRequest::default())?;
    let opts = RunOptions {
        stop: StopRule {
            max_iters: SHARP_MAX_ITERS,
            kkt_tol: SHARP_TOL,
            step_tol: 0.0,
        },
        keep_snapshots: false,
        start_u: Some(DVector::from_element(n, 1.0f64.clamp(-half_width, half_width))),
        ..RunOptions::default()
    };
    let trace = alavi_run(&prob, &params, &consts, &opts)?;
    if trace.status != RunStatus::Converged {
        let res = trace.last().map_or(f64::NAN, |r| r.kkt_residual);
        return Err(Error::Generation(format!(
            "sharp-point solve stopped after {} iterations with KKT error {res:e}",
            trace.iterations()
        )));
    }
    Ok((trace.final_u, trace.final_p))
}
