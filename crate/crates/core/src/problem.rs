//! The full problem instance: find `u ∈ U`, `Θ(u) ∈ −C` with
//! `⟨G(u), v − u⟩ + J(v) − J(u) ≥ 0` for feasible `v`.

use nalgebra::DVector;

use crate::cone::{ConeSpec, DUAL_FEAS_TOL};
use crate::constraint::ConstraintMap;
use crate::error::{check_dim, Error, Result};
use crate::feasible::FeasibleSet;
use crate::mapping::MappingSpec;
use crate::prox::ProxFunction;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReferenceRole {
    /// Solves the Minty system.
    Minty,
    /// A KKT point.
    Kkt,
    SaddleCandidate,
}

impl ReferenceRole {
    pub fn as_str(&self) -> &'static str {
        match self {
            ReferenceRole::Minty => "minty",
            ReferenceRole::Kkt => "kkt",
            ReferenceRole::SaddleCandidate => "saddle-candidate",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "minty" => Ok(ReferenceRole::Minty),
            "kkt" => Ok(ReferenceRole::Kkt),
            "saddle-candidate" => Ok(ReferenceRole::SaddleCandidate),
            other => Err(Error::Parse(format!("unknown reference role `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReferencePoint {
    pub u: DVector<f64>,
    pub p: DVector<f64>,
    pub role: ReferenceRole,
}

impl ReferencePoint {
    pub fn new(u: DVector<f64>, p: DVector<f64>, role: ReferenceRole) -> Self {
        ReferencePoint { u, p, role }
    }
}

#[derive(Debug, Clone)]
pub struct VIProblem {
    pub n: usize,
    pub m: usize,
    pub g: MappingSpec,
    pub j: ProxFunction,
    pub theta: ConstraintMap,
    pub cone: ConeSpec,
    pub feasible: FeasibleSet,
    pub reference: Option<ReferencePoint>,
    /// The constraint qualification `Θ(U) ∩ int C ≠ ∅` is taken on trust.
    pub assumes_slater: bool,
}

impl VIProblem {
    /// Builds and validates a problem.
    pub fn new(
        g: MappingSpec,
        j: ProxFunction,
        theta: ConstraintMap,
        cone: ConeSpec,
        feasible: FeasibleSet,
    ) -> Result<Self> {
        let n = g.dim();
        check_dim("VIProblem: J", n, j.dim())?;
        check_dim("VIProblem: theta domain", n, theta.n())?;
        check_dim("VIProblem: feasible set", n, feasible.dim())?;
        check_dim("VIProblem: cone", theta.m(), cone.dim())?;
        if !(theta.tau.is_finite() && theta.tau >= 0.0) {
            return Err(Error::Parameter(format!("tau must be finite, got {}", theta.tau)));
        }
        if let Some(l) = g.lipschitz {
            if !(l.is_finite() && l >= 0.0) {
                return Err(Error::Parameter(format!("L must be finite and nonnegative, got {l}")));
            }
        }
        Ok(VIProblem {
            n,
            m: theta.m(),
            g,
            j,
            theta,
            cone,
            feasible,
            reference: None,
            assumes_slater: true,
        })
    }

    /// Attaches a reference point after checking `p ∈ C*` and `Θ(u) ∈ −C`.
    pub fn with_reference(self, r: ReferencePoint) -> Result<Self> {
        self.with_reference_tol(r, DUAL_FEAS_TOL)
    }

    /// [`VIProblem::with_reference`] with a looser primal feasibility tolerance,
    /// for references that are themselves outputs of an iterative solve.
    pub fn with_reference_tol(mut self, r: ReferencePoint, tol: f64) -> Result<Self> {
        self.validate_reference_tol(&r, tol)?;
        self.reference = Some(r);
        Ok(self)
    }

    pub fn validate_reference(&self, r: &ReferencePoint) -> Result<()> {
        self.validate_reference_tol(r, DUAL_FEAS_TOL)
    }

    fn validate_reference_tol(&self, r: &ReferencePoint, tol: f64) -> Result<()> {
        check_dim("reference u", self.n, r.u.len())?;
        check_dim("reference p", self.m, r.p.len())?;
        if !self.cone.in_dual(&r.p, DUAL_FEAS_TOL) {
            return Err(Error::Usage("reference multiplier is outside the dual cone".into()));
        }
        if !self.cone.in_neg_cone(&self.theta.eval(&r.u), tol) {
            return Err(Error::Usage("reference point violates the cone constraint".into()));
        }
        if !self.feasible.contains(&r.u, DUAL_FEAS_TOL) {
            return Err(Error::Usage("reference point lies outside U".into()));
        }
        Ok(())
    }

    /// `⟨G(ζ), u − ζ⟩ + J(u) − J(ζ) + ⟨λ, Θ(u)⟩ − ⟨p, Θ(ζ)⟩`.
    pub fn gap_function(
        &self,
        u: &DVector<f64>,
        p: &DVector<f64>,
        zeta: &DVector<f64>,
        lam: &DVector<f64>,
    ) -> f64 {
        self.g.eval(zeta).dot(&(u - zeta)) + self.j.value(u) - self.j.value(zeta)
            + lam.dot(&self.theta.eval(u))
            - p.dot(&self.theta.eval(zeta))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraint::TauRule;
    use nalgebra::DMatrix;

    fn toy() -> VIProblem {
        let g = MappingSpec::custom(1, "id", |u| u.clone());
        let theta = ConstraintMap::affine(
            DMatrix::from_element(1, 1, 1.0),
            DVector::from_element(1, 1.0),
            TauRule::Frobenius,
        )
        .unwrap();
        VIProblem::new(
            g,
            ProxFunction::Zero { n: 1 },
            theta,
            ConeSpec::NonnegOrthant { m: 1 },
            FeasibleSet::uniform_box(1, -2.0, 2.0).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn reference_checks() {
        let p = toy();
        let ok = ReferencePoint::new(DVector::from_element(1, 0.0), DVector::zeros(1), ReferenceRole::Kkt);
        assert!(p.clone().with_reference(ok).is_ok());
        let infeasible =
            ReferencePoint::new(DVector::from_element(1, 1.5), DVector::zeros(1), ReferenceRole::Kkt);
        assert!(p.clone().with_reference(infeasible).is_err());
        let bad_dual = ReferencePoint::new(
            DVector::from_element(1, 0.0),
            DVector::from_element(1, -1.0),
            ReferenceRole::Kkt,
        );
        assert!(p.with_reference(bad_dual).is_err());
    }

    #[test]
    fn gap_vanishes_on_diagonal() {
        let p = toy();
        let u = DVector::from_element(1, 0.3);
        let lam = DVector::from_element(1, 0.7);
        assert!(p.gap_function(&u, &lam, &u, &lam).abs() < 1e-15);
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let g = MappingSpec::custom(2, "id", |u| u.clone());
        let theta = ConstraintMap::affine(DMatrix::zeros(1, 2), DVector::zeros(1), TauRule::Frobenius).unwrap();
        let r = VIProblem::new(
            g,
            ProxFunction::Zero { n: 3 },
            theta,
            ConeSpec::NonnegOrthant { m: 1 },
            FeasibleSet::WholeSpace { n: 2 },
        );
        assert!(matches!(r, Err(Error::Dimension { .. })));
    }
}
