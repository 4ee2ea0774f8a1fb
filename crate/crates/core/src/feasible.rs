//! The closed convex set `U` holding the primal variable.

use nalgebra::DVector;

use crate::error::{check_dim, Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum FeasibleSet {
    /// Componentwise bounds; entries may be infinite.
    Box { lo: DVector<f64>, hi: DVector<f64> },
    WholeSpace { n: usize },
}

impl FeasibleSet {
    pub fn new_box(lo: DVector<f64>, hi: DVector<f64>) -> Result<Self> {
        check_dim("FeasibleSet::new_box", lo.len(), hi.len())?;
        if lo.iter().zip(hi.iter()).any(|(l, h)| l > h || l.is_nan() || h.is_nan()) {
            return Err(Error::Usage("box requires lo <= hi componentwise".into()));
        }
        Ok(FeasibleSet::Box { lo, hi })
    }

    pub fn uniform_box(n: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::new_box(DVector::from_element(n, lo), DVector::from_element(n, hi))
    }

    pub fn dim(&self) -> usize {
        match self {
            FeasibleSet::Box { lo, .. } => lo.len(),
            FeasibleSet::WholeSpace { n } => *n,
        }
    }

    /// Bounds of coordinate `i`.
    pub fn bounds(&self, i: usize) -> (f64, f64) {
        match self {
            FeasibleSet::Box { lo, hi } => (lo[i], hi[i]),
            FeasibleSet::WholeSpace { .. } => (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    /// Finite sampling interval for coordinate `i`: the bounds themselves, or a
    /// window of width `2·half_width` along infinite sides.
    pub fn sampling_window(&self, i: usize, half_width: f64) -> (f64, f64) {
        let (lo, hi) = self.bounds(i);
        match (lo.is_finite(), hi.is_finite()) {
            (true, true) => (lo, hi),
            (true, false) => (lo, lo + 2.0 * half_width),
            (false, true) => (hi - 2.0 * half_width, hi),
            (false, false) => (-half_width, half_width),
        }
    }

    pub fn project(&self, x: &DVector<f64>) -> DVector<f64> {
        match self {
            FeasibleSet::Box { lo, hi } => DVector::from_fn(x.len(), |i, _| x[i].clamp(lo[i], hi[i])),
            FeasibleSet::WholeSpace { .. } => x.clone(),
        }
    }

    pub fn contains(&self, x: &DVector<f64>, tol: f64) -> bool {
        match self {
            FeasibleSet::Box { lo, hi } => x
                .iter()
                .enumerate()
                .all(|(i, &xi)| xi >= lo[i] - tol && xi <= hi[i] + tol),
            FeasibleSet::WholeSpace { .. } => x.iter().all(|v| v.is_finite()),
        }
    }

    /// Normal cone `N_{[lo,hi]}(x_i)` as an interval.
    pub fn normal_interval(&self, i: usize, xi: f64) -> (f64, f64) {
        let (lo, hi) = self.bounds(i);
        let at_lo = xi <= lo;
        let at_hi = xi >= hi;
        match (at_lo, at_hi) {
            (true, true) => (f64::NEG_INFINITY, f64::INFINITY),
            (true, false) => (f64::NEG_INFINITY, 0.0),
            (false, true) => (0.0, f64::INFINITY),
            (false, false) => (0.0, 0.0),
        }
    }
}

/// Componentwise clamp of `x` into `[lo, hi]`.
pub fn project_box(x: &DVector<f64>, lo: &DVector<f64>, hi: &DVector<f64>) -> Result<DVector<f64>> {
    check_dim("project_box", x.len(), lo.len())?;
    check_dim("project_box", x.len(), hi.len())?;
    if lo.iter().zip(hi.iter()).any(|(l, h)| l > h) {
        return Err(Error::Usage("project_box requires lo <= hi".into()));
    }
    Ok(DVector::from_fn(x.len(), |i, _| x[i].clamp(lo[i], hi[i])))
}
