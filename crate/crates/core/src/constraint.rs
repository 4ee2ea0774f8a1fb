//! Constraint maps `Θ: ℝⁿ → ℝᵐ`.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

type VecFn = dyn Fn(&DVector<f64>) -> DVector<f64> + Send + Sync;
type JacFn = dyn Fn(&DVector<f64>) -> DMatrix<f64> + Send + Sync;

#[derive(Clone)]
pub enum ConstraintForm {
    /// `Θ(u) = Au − b`.
    Affine { a: DMatrix<f64>, b: DVector<f64> },
    /// A general C-convex map with an explicit Jacobian.
    General {
        n: usize,
        m: usize,
        eval: Arc<VecFn>,
        jacobian: Arc<JacFn>,
    },
}

#[derive(Clone)]
pub struct ConstraintMap {
    pub form: ConstraintForm,
    /// Lipschitz constant `τ`.
    pub tau: f64,
}

impl fmt::Debug for ConstraintMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.form {
            ConstraintForm::Affine { a, .. } => {
                write!(f, "Affine({}x{}, tau={})", a.nrows(), a.ncols(), self.tau)
            }
            ConstraintForm::General { n, m, .. } => write!(f, "General({m}x{n}, tau={})", self.tau),
        }
    }
}

/// How `τ` is derived for an affine map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TauRule {
    /// Frobenius norm of `A`, a cheap upper bound on `‖A‖₂`.
    #[default]
    Frobenius,
    /// `‖A‖₂` by power iteration on `AᵀA`.
    Spectral,
}

/// Largest singular value of `a` via power iteration on `aᵀa`.
pub fn spectral_norm(a: &DMatrix<f64>) -> f64 {
    if a.nrows() == 0 || a.ncols() == 0 {
        return 0.0;
    }
    let ata = a.transpose() * a;
    let n = ata.nrows();
    // deterministic, non-degenerate start
    let mut x = DVector::from_fn(n, |i, _| 1.0 + (i as f64 * 0.618).fract());
    x /= x.norm();
    let mut lambda = 0.0;
    for _ in 0..10_000 {
        let y = &ata * &x;
        let ny = y.norm();
        if ny == 0.0 {
            return 0.0;
        }
        let next = x.dot(&y);
        x = y / ny;
        if (next - lambda).abs() <= 1e-14 * next.abs() {
            lambda = next;
            break;
        }
        lambda = next;
    }
    // power iteration approaches from below; a relative pad keeps τ an upper bound
    lambda.max(0.0).sqrt() * (1.0 + 1e-9)
}

impl ConstraintMap {
    pub fn affine(a: DMatrix<f64>, b: DVector<f64>, rule: TauRule) -> Result<Self> {
        if a.nrows() != b.len() {
            return Err(Error::Dimension {
                context: "ConstraintMap::affine",
                expected: a.nrows(),
                got: b.len(),
            });
        }
        let tau = match rule {
            TauRule::Frobenius => a.norm(),
            TauRule::Spectral => spectral_norm(&a),
        };
        Ok(ConstraintMap {
            form: ConstraintForm::Affine { a, b },
            tau,
        })
    }

    pub fn affine_with_tau(a: DMatrix<f64>, b: DVector<f64>, tau: f64) -> Result<Self> {
        let mut c = Self::affine(a, b, TauRule::Frobenius)?;
        if !(tau.is_finite() && tau >= 0.0) {
            return Err(Error::Parameter(format!("tau must be finite and nonnegative, got {tau}")));
        }
        c.tau = tau;
        Ok(c)
    }

    pub fn general(
        n: usize,
        m: usize,
        tau: f64,
        eval: impl Fn(&DVector<f64>) -> DVector<f64> + Send + Sync + 'static,
        jacobian: impl Fn(&DVector<f64>) -> DMatrix<f64> + Send + Sync + 'static,
    ) -> Self {
        ConstraintMap {
            form: ConstraintForm::General {
                n,
                m,
                eval: Arc::new(eval),
                jacobian: Arc::new(jacobian),
            },
            tau,
        }
    }

    pub fn n(&self) -> usize {
        match &self.form {
            ConstraintForm::Affine { a, .. } => a.ncols(),
            ConstraintForm::General { n, .. } => *n,
        }
    }

    pub fn m(&self) -> usize {
        match &self.form {
            ConstraintForm::Affine { a, .. } => a.nrows(),
            ConstraintForm::General { m, .. } => *m,
        }
    }

    pub fn is_affine(&self) -> bool {
        matches!(self.form, ConstraintForm::Affine { .. })
    }

    pub fn eval(&self, u: &DVector<f64>) -> DVector<f64> {
        match &self.form {
            ConstraintForm::Affine { a, b } => a * u - b,
            ConstraintForm::General { eval, .. } => eval(u),
        }
    }

    pub fn jacobian(&self, u: &DVector<f64>) -> DMatrix<f64> {
        match &self.form {
            ConstraintForm::Affine { a, .. } => a.clone(),
            ConstraintForm::General { jacobian, .. } => jacobian(u),
        }
    }

    /// `∇Θ(u)ᵀ q`.
    pub fn jacobian_t_mul(&self, u: &DVector<f64>, q: &DVector<f64>) -> DVector<f64> {
        match &self.form {
            ConstraintForm::Affine { a, .. } => a.tr_mul(q),
            ConstraintForm::General { jacobian, .. } => jacobian(u).tr_mul(q),
        }
    }
}
