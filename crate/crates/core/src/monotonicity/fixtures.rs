//! Four small worked problems with known class memberships and witnesses.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use crate::cone::ConeSpec;
use crate::constraint::{ConstraintMap, TauRule};
use crate::error::Result;
use crate::feasible::FeasibleSet;
use crate::mapping::MappingSpec;
use crate::problem::{ReferencePoint, ReferenceRole, VIProblem};
use crate::prox::ProxFunction;

use super::classify::MonotonicityClass::{self, *};

/// A pair expected to refute `class`, with the values printed alongside it
/// where there are any.
#[derive(Debug, Clone)]
pub struct KnownWitness {
    pub class: MonotonicityClass,
    pub u: DVector<f64>,
    pub v: DVector<f64>,
    pub premise: Option<f64>,
    pub value: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub problem: VIProblem,
    /// Saddle point of both the KKT and the Minty systems.
    pub reference: ReferencePoint,
    pub witnesses: Vec<KnownWitness>,
    /// `(class, refuted)` for every class with a stated verdict.
    pub expected: Vec<(MonotonicityClass, bool)>,
}

impl Fixture {
    pub fn witness_pairs(&self) -> Vec<(DVector<f64>, DVector<f64>)> {
        self.witnesses.iter().map(|w| (w.u.clone(), w.v.clone())).collect()
    }
}

fn v1(x: f64) -> DVector<f64> {
    DVector::from_element(1, x)
}

fn v2(x: f64, y: f64) -> DVector<f64> {
    DVector::from_vec(vec![x, y])
}

fn witness(class: MonotonicityClass, u: DVector<f64>, v: DVector<f64>, premise: Option<f64>, value: Option<f64>) -> KnownWitness {
    KnownWitness { class, u, v, premise, value }
}

/// `G(u) = 1/(1+u)`, `J(u) = u`, `U = ℝ₊`, `u − 1 ≤ 0`.
pub fn decreasing_reciprocal() -> Result<Fixture> {
    let problem = VIProblem::new(
        MappingSpec::custom(1, "1/(1+u)", |u| u.map(|x| 1.0 / (1.0 + x))),
        ProxFunction::Linear { g: v1(1.0) },
        ConstraintMap::affine(DMatrix::from_element(1, 1, 1.0), v1(1.0), TauRule::Frobenius)?,
        ConeSpec::NonnegOrthant { m: 1 },
        FeasibleSet::new_box(v1(0.0), v1(f64::INFINITY))?,
    )?;
    let reference = ReferencePoint::new(v1(0.0), v1(0.0), ReferenceRole::Minty);
    Ok(Fixture {
        name: "A.1",
        problem: problem.with_reference(reference.clone())?,
        reference,
        witnesses: vec![
            witness(Monotone, v1(0.0), v1(1.0), None, Some(-0.5)),
            witness(StarMonotone, v1(1.0), v1(1.0), None, Some(-0.5)),
        ],
        expected: vec![
            (Monotone, true),
            (StarMonotone, true),
            (PseudoMonotone, false),
            (JPseudoMonotone, false),
            (LagrangianPseudoMonotone, false),
        ],
    })
}

/// `G(u) = sin u − 1`, `J(u) = u`, `U = [0, π]`, `u − 3π/4 ≤ 0`.
pub fn shifted_sine() -> Result<Fixture> {
    let problem = VIProblem::new(
        MappingSpec::custom(1, "sin(u)-1", |u| u.map(|x| x.sin() - 1.0)),
        ProxFunction::Linear { g: v1(1.0) },
        ConstraintMap::affine(DMatrix::from_element(1, 1, 1.0), v1(0.75 * PI), TauRule::Frobenius)?,
        ConeSpec::NonnegOrthant { m: 1 },
        FeasibleSet::new_box(v1(0.0), v1(PI))?,
    )?;
    let reference = ReferencePoint::new(v1(0.0), v1(0.0), ReferenceRole::Minty);
    Ok(Fixture {
        name: "A.2",
        problem: problem.with_reference(reference.clone())?,
        reference,
        witnesses: vec![
            witness(Monotone, v1(PI / 2.0), v1(0.75 * PI), None, None),
            // G(π/2) = 0, so the premise holds with equality
            witness(PseudoMonotone, v1(PI / 2.0), v1(0.625 * PI), Some(0.0), None),
        ],
        expected: vec![(StarMonotone, false), (Monotone, true), (PseudoMonotone, true)],
    })
}

/// `G(u) = u²`, `J = 0`, `U = [−1, 1]`, `u ≤ 0`.
pub fn square() -> Result<Fixture> {
    let problem = VIProblem::new(
        MappingSpec::custom(1, "u^2", |u| u.map(|x| x * x)),
        ProxFunction::Zero { n: 1 },
        ConstraintMap::affine(DMatrix::from_element(1, 1, 1.0), v1(0.0), TauRule::Frobenius)?,
        ConeSpec::NonnegOrthant { m: 1 },
        FeasibleSet::new_box(v1(-1.0), v1(1.0))?,
    )?;
    let reference = ReferencePoint::new(v1(-1.0), v1(0.0), ReferenceRole::Minty);
    Ok(Fixture {
        name: "A.3",
        problem: problem.with_reference(reference.clone())?,
        reference,
        witnesses: vec![
            witness(StarMonotone, v1(0.0), v1(0.0), None, Some(-1.0)),
            // premise ⟨G(0), −1⟩ = 0, conclusion ⟨G(−1), −1⟩ = −1
            witness(PseudoMonotone, v1(0.0), v1(-1.0), Some(0.0), Some(-1.0)),
            witness(JPseudoMonotone, v1(0.0), v1(-1.0), Some(0.0), Some(-1.0)),
            witness(LagrangianPseudoMonotone, v1(0.0), v1(-1.0), Some(0.0), Some(-1.0)),
        ],
        expected: vec![
            (StarMonotone, true),
            (PseudoMonotone, true),
            (JPseudoMonotone, true),
            (LagrangianPseudoMonotone, true),
            (QuasiMonotone, false),
            (LagrangianQuasiMonotone, false),
        ],
    })
}

/// `G(x, y) = (2x(y²+1), 2y(x²+1))`, `J = x + y`, `U = ℝ²₊`, `x − y = 0`.
pub fn coupled_quadratic() -> Result<Fixture> {
    let problem = VIProblem::new(
        MappingSpec::custom(2, "coupled", |u| {
            let (x, y) = (u[0], u[1]);
            v2(2.0 * x * (y * y + 1.0), 2.0 * y * (x * x + 1.0))
        }),
        ProxFunction::Linear { g: v2(1.0, 1.0) },
        ConstraintMap::affine(DMatrix::from_row_slice(1, 2, &[1.0, -1.0]), v1(0.0), TauRule::Frobenius)?,
        ConeSpec::ZeroCone { m: 1 },
        FeasibleSet::new_box(v2(0.0, 0.0), v2(f64::INFINITY, f64::INFINITY))?,
    )?;
    let reference = ReferencePoint::new(v2(0.0, 0.0), v1(1.0), ReferenceRole::Minty);
    let (a, b) = (v2(1.0, 6.0), v2(3.0, 3.0));
    Ok(Fixture {
        name: "A.4",
        problem: problem.with_reference(reference.clone())?,
        reference,
        witnesses: vec![
            witness(Monotone, a.clone(), b.clone(), None, Some(-136.0)),
            witness(LagrangianPseudoMonotone, b.clone(), a.clone(), Some(56.0), Some(-80.0)),
            witness(JPseudoMonotone, b.clone(), a.clone(), Some(61.0), Some(-75.0)),
            witness(PseudoMonotone, b, a, Some(60.0), Some(-76.0)),
        ],
        expected: vec![
            (StarMonotone, false),
            (Monotone, true),
            (LagrangianPseudoMonotone, true),
            (JPseudoMonotone, true),
            (PseudoMonotone, true),
        ],
    })
}

pub fn appendix_fixtures() -> Result<Vec<Fixture>> {
    Ok(vec![decreasing_reciprocal()?, shifted_sine()?, square()?, coupled_quadratic()?])
}
