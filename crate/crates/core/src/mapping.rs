//! The operator `G: ℝⁿ → ℝⁿ`.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

type VecFn = dyn Fn(&DVector<f64>) -> DVector<f64> + Send + Sync;

#[derive(Clone)]
pub enum MappingKind {
    Zero { n: usize },
    /// `G(u) = Qu + c`.
    Affine { q: DMatrix<f64>, c: DVector<f64> },
    /// `G(u) = M(u)(u − ¼·1)` with `M(u) = t₁t₁ᵀ + t₂t₂ᵀ`, `t₁ = A cos u`, `t₂ = B logistic(u)`.
    NcviOne { a: DMatrix<f64>, b: DMatrix<f64> },
    /// `G(u) = rev(u)∘² ∘ (u − u♯)`.
    NcviTwo { sharp: DVector<f64> },
    Custom {
        n: usize,
        label: String,
        f: Arc<VecFn>,
    },
}

impl fmt::Debug for MappingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MappingKind::Zero { n } => write!(f, "Zero({n})"),
            MappingKind::Affine { c, .. } => write!(f, "Affine(n={})", c.len()),
            MappingKind::NcviOne { a, .. } => write!(f, "NcviOne(n={})", a.nrows()),
            MappingKind::NcviTwo { sharp } => write!(f, "NcviTwo(n={})", sharp.len()),
            MappingKind::Custom { label, n, .. } => write!(f, "Custom({label}, n={n})"),
        }
    }
}

/// `G` together with its Lipschitz constant, when known.
#[derive(Debug, Clone)]
pub struct MappingSpec {
    pub kind: MappingKind,
    pub lipschitz: Option<f64>,
}

fn logistic(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

impl MappingSpec {
    pub fn new(kind: MappingKind) -> Self {
        MappingSpec { kind, lipschitz: None }
    }

    pub fn with_lipschitz(mut self, l: f64) -> Self {
        self.lipschitz = Some(l);
        self
    }

    pub fn custom(
        n: usize,
        label: impl Into<String>,
        f: impl Fn(&DVector<f64>) -> DVector<f64> + Send + Sync + 'static,
    ) -> Self {
        Self::new(MappingKind::Custom {
            n,
            label: label.into(),
            f: Arc::new(f),
        })
    }

    pub fn dim(&self) -> usize {
        match &self.kind {
            MappingKind::Zero { n } | MappingKind::Custom { n, .. } => *n,
            MappingKind::Affine { c, .. } => c.len(),
            MappingKind::NcviOne { a, .. } => a.ncols(),
            MappingKind::NcviTwo { sharp } => sharp.len(),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match &self.kind {
            MappingKind::Zero { .. } => "zero",
            MappingKind::Affine { .. } => "affine",
            MappingKind::NcviOne { .. } => "ncvi1",
            MappingKind::NcviTwo { .. } => "ncvi2",
            MappingKind::Custom { .. } => "custom",
        }
    }

    pub fn eval(&self, u: &DVector<f64>) -> DVector<f64> {
        match &self.kind {
            MappingKind::Zero { n } => DVector::zeros(*n),
            MappingKind::Affine { q, c } => q * u + c,
            MappingKind::NcviOne { a, b } => {
                let t1 = a * u.map(f64::cos);
                let t2 = b * u.map(logistic);
                let d = u.add_scalar(-0.25);
                let s1 = t1.dot(&d);
                let s2 = t2.dot(&d);
                t1 * s1 + t2 * s2
            }
            MappingKind::NcviTwo { sharp } => {
                let n = u.len();
                DVector::from_fn(n, |i, _| {
                    let d = u[n - 1 - i];
                    d * d * (u[i] - sharp[i])
                })
            }
            MappingKind::Custom { f, .. } => f(u),
        }
    }

    /// Whether `G` has a constant Jacobian.
    pub fn is_affine(&self) -> bool {
        matches!(self.kind, MappingKind::Affine { .. } | MappingKind::Zero { .. })
    }
}
