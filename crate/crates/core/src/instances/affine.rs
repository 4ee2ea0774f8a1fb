//! Monotone affine family `G(u) = Qu + c` on `[−1,1]ⁿ` with `Au ≤ b`, built
//! around a known solution.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::cone::ConeSpec;
use crate::constraint::{spectral_norm, ConstraintMap, TauRule};
use crate::error::{Error, Result};
use crate::feasible::FeasibleSet;
use crate::mapping::{MappingKind, MappingSpec};
use crate::problem::{ReferencePoint, ReferenceRole, VIProblem};
use crate::prox::ProxFunction;
use crate::rng::{streams, Stream};

use super::normal_matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AffineKind {
    /// `Q = RᵀR`, possibly singular.
    PsdLinear,
    /// `Q = RᵀR + I`.
    StronglyMonotone,
}

impl AffineKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            AffineKind::PsdLinear => "psd-linear",
            AffineKind::StronglyMonotone => "strongly-monotone",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "psd-linear" => Ok(AffineKind::PsdLinear),
            "strongly-monotone" => Ok(AffineKind::StronglyMonotone),
            other => Err(Error::Usage(format!(
                "unknown affine kind `{other}` (expected psd-linear or strongly-monotone)"
            ))),
        }
    }
}

/// Generates an instance whose reference `(u*, p*)` is an exact KKT point.
///
/// `u*` puts roughly a third of its coordinates on each bound; the first
/// `⌈m/2⌉` rows are active with positive multipliers, the rest have slack.
pub fn gen_monotone_affine(n: usize, m: usize, seed: u64, kind: AffineKind) -> Result<VIProblem> {
    if n == 0 {
        return Err(Error::Usage("affine family needs n >= 1".into()));
    }
    let r = normal_matrix(&mut Stream::new(seed, streams::B), (n / 2).max(1), n) / (n as f64).sqrt();
    let mut q = r.transpose() * &r;
    if kind == AffineKind::StronglyMonotone {
        q += DMatrix::identity(n, n);
    }
    let a = normal_matrix(&mut Stream::new(seed, streams::A), m, n);

    let mut s = Stream::new(seed, streams::SOLUTION);
    let mut u_star = DVector::zeros(n);
    let mut normal = DVector::zeros(n);
    for i in 0..n {
        match i % 3 {
            0 => {
                u_star[i] = -1.0;
                normal[i] = -s.uniform_in(0.5, 1.5);
            }
            1 => {
                u_star[i] = 1.0;
                normal[i] = s.uniform_in(0.5, 1.5);
            }
            _ => u_star[i] = s.uniform_in(-0.5, 0.5),
        }
    }
    let active = m.div_ceil(2);
    let au = &a * &u_star;
    let mut b = au.clone();
    let mut p_star = DVector::zeros(m);
    for k in 0..m {
        if k < active {
            p_star[k] = s.uniform_in(0.5, 1.5);
        } else {
            b[k] += s.uniform_in(0.5, 1.5);
        }
    }
    let c = -(&q * &u_star) - a.transpose() * &p_star - &normal;

    let l = spectral_norm(&q);
    let g = MappingSpec::new(MappingKind::Affine { q, c }).with_lipschitz(l);
    let theta = ConstraintMap::affine(a, b, TauRule::Frobenius)?;
    let prob = VIProblem::new(
        g,
        ProxFunction::Zero { n },
        theta,
        ConeSpec::NonnegOrthant { m },
        FeasibleSet::uniform_box(n, -1.0, 1.0)?,
    )?;
    prob.with_reference(ReferencePoint::new(u_star, p_star, ReferenceRole::Minty))
}
