use nalgebra::{DMatrix, DVector};

use super::fixtures::*;
use super::*;
use crate::cone::ConeSpec;
use crate::constraint::{ConstraintMap, TauRule};
use crate::feasible::FeasibleSet;
use crate::instances::{gen_monotone_affine, gen_ncvi1, AffineKind};
use crate::mapping::MappingSpec;
use crate::problem::{ReferencePoint, ReferenceRole, VIProblem};
use crate::prox::ProxFunction;

fn run_fixture(f: &Fixture, samples: usize) -> MonotonicityReport {
    let opts = ClassifyOptions {
        samples,
        seed: 5,
        extra_pairs: f.witness_pairs(),
        ..Default::default()
    };
    classify(&f.problem, Some(&f.reference), &opts).unwrap()
}

#[test]
fn fixtures_match_expected_verdicts() {
    for f in appendix_fixtures().unwrap() {
        let rep = run_fixture(&f, 2000);
        for (class, refuted) in &f.expected {
            assert_eq!(rep.get(*class).refuted(), *refuted, "{} {class}: {:?}", f.name, rep.get(*class));
        }
    }
}

#[test]
fn fixture_witnesses_evaluate_to_printed_values() {
    for f in appendix_fixtures().unwrap() {
        for w in &f.witnesses {
            let pv = evaluate_pair(&f.problem, w.class, &w.u, &w.v, Some(&f.reference), 1e-6).unwrap();
            assert!(pv.refutes(w.class.premise(), 1e-9), "{} {}: {pv:?}", f.name, w.class);
            if let Some(p) = w.premise {
                assert!((pv.premise.unwrap() - p).abs() < 1e-12, "{} {}: {pv:?}", f.name, w.class);
            }
            if let Some(v) = w.value {
                assert!((pv.value - v).abs() < 1e-12, "{} {}: {pv:?}", f.name, w.class);
            }
        }
    }
}

#[test]
fn coupled_values_by_hand() {
    let f = coupled_quadratic().unwrap();
    let g = |x: f64, y: f64| [2.0 * x * (y * y + 1.0), 2.0 * y * (x * x + 1.0)];
    assert_eq!(g(1.0, 6.0), [74.0, 24.0]);
    assert_eq!(g(3.0, 3.0), [60.0, 60.0]);
    let ge = f.problem.g.eval(&DVector::from_vec(vec![1.0, 6.0]));
    assert_eq!(ge.as_slice(), &[74.0, 24.0]);
}

#[test]
fn reciprocal_at_one() {
    let f = decreasing_reciprocal().unwrap();
    assert_eq!(f.problem.g.eval(&DVector::from_element(1, 1.0))[0], 0.5);
}

#[test]
fn square_pair_from_text_does_not_refute() {
    // (1, 0) in either order leaves pseudo-monotonicity standing
    let f = square().unwrap();
    let (one, zero) = (DVector::from_element(1, 1.0), DVector::from_element(1, 0.0));
    for (u, v) in [(&one, &zero), (&zero, &one)] {
        let pv = evaluate_pair(&f.problem, MonotonicityClass::PseudoMonotone, u, v, None, 0.0).unwrap();
        assert!(!pv.refutes(Premise::NonNegative, 1e-9), "{pv:?}");
    }
}

#[test]
fn identity_map_nothing_refuted() {
    let n = 3;
    let p = VIProblem::new(
        MappingSpec::custom(n, "id", |u| u.clone()).with_lipschitz(1.0),
        ProxFunction::Zero { n },
        ConstraintMap::affine(DMatrix::zeros(1, n), DVector::zeros(1), TauRule::Frobenius).unwrap(),
        ConeSpec::NonnegOrthant { m: 1 },
        FeasibleSet::uniform_box(n, -1.0, 1.0).unwrap(),
    )
    .unwrap();
    let r = ReferencePoint::new(DVector::zeros(n), DVector::zeros(1), ReferenceRole::Minty);
    let rep = classify(&p, Some(&r), &ClassifyOptions::default()).unwrap();
    assert!(rep.sampling.pairs >= 10_000);
    for (c, res) in &rep.results {
        assert_eq!(res.verdict, Verdict::NotRefuted, "{c}");
    }
}

#[test]
fn affine_instance_not_refuted() {
    let p = gen_monotone_affine(8, 3, 4, AffineKind::PsdLinear).unwrap();
    let r = p.reference.clone().unwrap();
    let rep = classify(&p, Some(&r), &ClassifyOptions::default()).unwrap();
    for (c, res) in &rep.results {
        assert_eq!(res.verdict, Verdict::NotRefuted, "{c}: {res:?}");
    }
}

#[test]
fn ncvi1_monotone_refuted_and_minty_holds() {
    let p = gen_ncvi1(50, 1).unwrap();
    let r = p.reference.clone().unwrap();
    let rep = classify(&p, Some(&r), &ClassifyOptions { samples: 2000, ..Default::default() }).unwrap();
    let m = rep.get(MonotonicityClass::Monotone);
    assert!(m.refuted());
    // re-verify the witness directly
    let u = DVector::from_vec(m.witness_u.clone().unwrap());
    let v = DVector::from_vec(m.witness_v.clone().unwrap());
    let direct = (p.g.eval(&u) - p.g.eval(&v)).dot(&(&u - &v));
    assert!(direct < -1e-9 && direct == m.margin.unwrap());
    // the star class at ¼·1 reduces to the Minty slack, a PSD quadratic form
    assert!(!rep.get(MonotonicityClass::StarMonotone).refuted());
    let mv = verify_minty(&p, &r, 10_000, 3, 1e-9).unwrap();
    assert!(!mv.refuted, "{mv:?}");
}

#[test]
fn minty_dual_side_catches_infeasible_candidate() {
    let f = square().unwrap();
    let bad = ReferencePoint::new(DVector::from_element(1, 0.5), DVector::zeros(1), ReferenceRole::Minty);
    let mv = verify_minty(&f.problem, &bad, 100, 0, 1e-9).unwrap();
    assert!(mv.refuted);
    assert_eq!(mv.side, Some(MintySide::Dual));
}

#[test]
fn minty_holds_on_sine_fixture() {
    let f = shifted_sine().unwrap();
    let mv = verify_minty(&f.problem, &f.reference, 5000, 1, 1e-9).unwrap();
    assert!(!mv.refuted, "{mv:?}");
}

#[test]
fn hierarchy_on_shared_pairs() {
    for f in appendix_fixtures().unwrap() {
        let rep = run_fixture(&f, 500);
        let mono = rep.get(MonotonicityClass::Monotone);
        if !mono.refuted() {
            assert!(!rep.get(MonotonicityClass::PseudoMonotone).refuted(), "{}", f.name);
            assert!(!rep.get(MonotonicityClass::QuasiMonotone).refuted(), "{}", f.name);
        }
        if rep.get(MonotonicityClass::PseudoMonotone).refuted() {
            assert!(mono.refuted(), "{}", f.name);
        }
    }
}

#[test]
fn skipped_without_reference() {
    let f = square().unwrap();
    let rep = classify(&f.problem, None, &ClassifyOptions { samples: 10, ..Default::default() }).unwrap();
    assert_eq!(rep.get(MonotonicityClass::StarMonotone).verdict, Verdict::Skipped);
    assert_eq!(rep.get(MonotonicityClass::LagrangianQuasiMonotone).verdict, Verdict::Skipped);
    assert_ne!(rep.get(MonotonicityClass::PseudoMonotone).verdict, Verdict::Skipped);
}

#[test]
fn report_is_deterministic_and_serializes() {
    let f = coupled_quadratic().unwrap();
    let a = run_fixture(&f, 300);
    let b = run_fixture(&f, 300);
    assert_eq!(a, b);
    let j = serde_json::to_value(&a).unwrap();
    assert_eq!(j["monotone"]["verdict"], "refuted");
    assert!(j["sampling"]["pairs"].as_u64().unwrap() > 0);
}

#[test]
fn class_names_round_trip() {
    for c in MonotonicityClass::ALL {
        assert_eq!(MonotonicityClass::parse(c.as_str()).unwrap(), c);
    }
}
