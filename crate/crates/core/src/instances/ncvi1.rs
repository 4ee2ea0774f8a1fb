//! Box-and-budget family: `G(u) = M(u)(u − ¼·1)` on
//! `{u ∈ [0,1]ⁿ : 1ᵀu ≤ n/2}` with `M(u) = t₁t₁ᵀ + t₂t₂ᵀ`.

use nalgebra::{DMatrix, DVector};

use crate::cone::ConeSpec;
use crate::constraint::ConstraintMap;
use crate::error::{Error, Result};
use crate::feasible::FeasibleSet;
use crate::mapping::{MappingKind, MappingSpec};
use crate::problem::{ReferencePoint, ReferenceRole, VIProblem};
use crate::prox::ProxFunction;
use crate::rng::{streams, Stream};
use crate::solver::lipschitz::estimate_lipschitz;

use super::{normal_matrix, LIPSCHITZ_SAMPLES};

/// Generates the instance for `(n, seed)`; `A` and `B` have i.i.d. standard
/// normal entries from separate streams.
pub fn gen_ncvi1(n: usize, seed: u64) -> Result<VIProblem> {
    if n < 2 {
        return Err(Error::Usage(format!("ncvi1 needs n >= 2, got {n}")));
    }
    let a = normal_matrix(&mut Stream::new(seed, streams::A), n, n);
    let b = normal_matrix(&mut Stream::new(seed, streams::B), n, n);
    ncvi1_from_matrices(a, b, None, seed)
}

/// Builds the instance from explicit `A`, `B`. `L` is estimated with `seed`
/// unless given.
pub fn ncvi1_from_matrices(
    a: DMatrix<f64>,
    b: DMatrix<f64>,
    lipschitz: Option<f64>,
    seed: u64,
) -> Result<VIProblem> {
    let n = a.nrows();
    if n < 2 || a.ncols() != n || b.nrows() != n || b.ncols() != n {
        return Err(Error::Usage("ncvi1 needs square n×n matrices with n >= 2".into()));
    }
    let domain = FeasibleSet::uniform_box(n, 0.0, 1.0)?;
    let mut g = MappingSpec::new(MappingKind::NcviOne { a, b });
    let l = match lipschitz {
        Some(l) => l,
        None => estimate_lipschitz(&g, &domain, LIPSCHITZ_SAMPLES, seed)?,
    };
    g = g.with_lipschitz(l);
    let theta = ConstraintMap::affine_with_tau(
        DMatrix::from_element(1, n, 1.0),
        DVector::from_element(1, n as f64 / 2.0),
        (n as f64).sqrt(),
    )?;
    let prob = VIProblem::new(g, ProxFunction::Zero { n }, theta, ConeSpec::NonnegOrthant { m: 1 }, domain)?;
    prob.with_reference(ReferencePoint::new(
        DVector::from_element(n, 0.25),
        DVector::zeros(1),
        ReferenceRole::Minty,
    ))
}

/// The 2×2 matrices of the textbook non-monotonicity example.
pub fn example_matrices() -> (DMatrix<f64>, DMatrix<f64>) {
    (
        DMatrix::from_row_slice(2, 2, &[-0.9, -0.8, 0.3, 1.2]),
        DMatrix::from_row_slice(2, 2, &[0.9, 0.7, -0.3, -0.3]),
    )
}
