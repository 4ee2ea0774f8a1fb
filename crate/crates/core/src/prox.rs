//! Separable convex regularizers `J` and their proximal maps.

use std::fmt;
use std::sync::Arc;

use nalgebra::DVector;

use crate::error::{check_dim, Error, Result};

/// A user-supplied separable convex term `J(u) = Σᵢ fᵢ(uᵢ)`.
pub trait ScalarTerms: Send + Sync {
    fn value(&self, i: usize, x: f64) -> f64;
    /// `argmin_u fᵢ(u) + (u − x)²/(2t)`.
    fn prox(&self, i: usize, x: f64, t: f64) -> f64;
    /// `∂fᵢ(x)` as a closed interval, when known.
    fn subdiff(&self, _i: usize, _x: f64) -> Option<(f64, f64)> {
        None
    }
}

#[derive(Clone)]
pub enum ProxFunction {
    Zero { n: usize },
    /// `w · ‖u − c‖₁`.
    WeightedL1 { center: DVector<f64>, weight: f64 },
    /// `⟨g, u⟩`.
    Linear { g: DVector<f64> },
    /// Indicator of `[lo, hi]`.
    BoxIndicator { lo: DVector<f64>, hi: DVector<f64> },
    CustomSeparable {
        n: usize,
        label: String,
        terms: Arc<dyn ScalarTerms>,
    },
}

impl fmt::Debug for ProxFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProxFunction::Zero { n } => write!(f, "Zero({n})"),
            ProxFunction::WeightedL1 { weight, center } => {
                write!(f, "WeightedL1(w={weight}, n={})", center.len())
            }
            ProxFunction::Linear { g } => write!(f, "Linear(n={})", g.len()),
            ProxFunction::BoxIndicator { lo, .. } => write!(f, "BoxIndicator(n={})", lo.len()),
            ProxFunction::CustomSeparable { label, n, .. } => write!(f, "Custom({label}, n={n})"),
        }
    }
}

#[inline]
pub fn soft_threshold(x: f64, level: f64) -> f64 {
    x.signum() * (x.abs() - level).max(0.0)
}

impl ProxFunction {
    pub fn dim(&self) -> usize {
        match self {
            ProxFunction::Zero { n } | ProxFunction::CustomSeparable { n, .. } => *n,
            ProxFunction::WeightedL1 { center, .. } => center.len(),
            ProxFunction::Linear { g } => g.len(),
            ProxFunction::BoxIndicator { lo, .. } => lo.len(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ProxFunction::Zero { .. } => "zero",
            ProxFunction::WeightedL1 { .. } => "weighted-l1",
            ProxFunction::Linear { .. } => "linear",
            ProxFunction::BoxIndicator { .. } => "indicator-of-box",
            ProxFunction::CustomSeparable { .. } => "custom-separable",
        }
    }

    /// Value of coordinate term `fᵢ(x)`.
    pub fn term_value(&self, i: usize, x: f64) -> f64 {
        match self {
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
            ProxFunction::CustomSeparable { terms, .. } => terms.value(i, x),
        }
    }

    pub fn value(&self, u: &DVector<f64>) -> f64 {
        match self {
            ProxFunction::Zero { .. } => 0.0,
            ProxFunction::Linear { g } => g.dot(u),
            _ => (0..u.len()).map(|i| self.term_value(i, u[i])).sum(),
        }
    }

    /// Scalar prox of coordinate `i`.
    pub fn term_prox(&self, i: usize, x: f64, t: f64) -> f64 {
        match self {
            ProxFunction::Zero { .. } => x,
            ProxFunction::WeightedL1 { center, weight } => {
                center[i] + soft_threshold(x - center[i], weight * t)
            }
            ProxFunction::Linear { g } => x - t * g[i],
            ProxFunction::BoxIndicator { lo, hi } => x.clamp(lo[i], hi[i]),
            ProxFunction::CustomSeparable { terms, .. } => terms.prox(i, x, t),
        }
    }

    /// `∂fᵢ(x)` as an interval; `None` when the term cannot report it.
    pub fn term_subdiff(&self, i: usize, x: f64) -> Option<(f64, f64)> {
        match self {
            ProxFunction::Zero { .. } => Some((0.0, 0.0)),
            ProxFunction::WeightedL1 { center, weight } => {
                let d = x - center[i];
                Some(if d > 0.0 {
                    (*weight, *weight)
                } else if d < 0.0 {
                    (-weight, -weight)
                } else {
                    (-weight, *weight)
                })
            }
            ProxFunction::Linear { g } => Some((g[i], g[i])),
            ProxFunction::BoxIndicator { lo, hi } => {
                let (l, h) = (lo[i], hi[i]);
                Some(match (x <= l, x >= h) {
                    (true, true) => (f64::NEG_INFINITY, f64::INFINITY),
                    (true, false) => (f64::NEG_INFINITY, 0.0),
                    (false, true) => (0.0, f64::INFINITY),
                    (false, false) => (0.0, 0.0),
                })
            }
            ProxFunction::CustomSeparable { terms, .. } => terms.subdiff(i, x),
        }
    }

    pub fn prox(&self, x: &DVector<f64>, t: f64) -> DVector<f64> {
        DVector::from_fn(x.len(), |i, _| self.term_prox(i, x[i], t))
    }
}

/// `argmin_u f(u) + ‖u − x‖²/(2t)`.
pub fn prox_apply(f: &ProxFunction, x: &DVector<f64>, t: f64) -> Result<DVector<f64>> {
    if !(t > 0.0) {
        return Err(Error::Parameter(format!("prox step must be positive, got {t}")));
    }
    check_dim("prox_apply", f.dim(), x.len())?;
    Ok(f.prox(x, t))
}
