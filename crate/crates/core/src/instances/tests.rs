use nalgebra::{DMatrix, DVector};

use super::*;
use crate::certify::kkt::kkt_residual;
use crate::mapping::{MappingKind, MappingSpec};
use crate::oracle::golden_section;

fn inner(g: &MappingSpec, u: &[f64], v: &[f64]) -> f64 {
    let u = DVector::from_column_slice(u);
    let v = DVector::from_column_slice(v);
    (g.eval(&u) - g.eval(&v)).dot(&(u - v))
}

#[test]
fn ncvi1_example_value() {
    let (a, b) = ncvi1::example_matrices();
    let p = ncvi1_from_matrices(a, b, Some(1.0), 0).unwrap();
    let val = inner(&p.g, &[0.0, 0.7], &[0.1, 0.9]);
    assert!((val + 0.0245).abs() < 5e-4, "{val}");
}

#[test]
fn ncvi1_example_value_by_hand() {
    // G(u) = t1 (t1·w) + t2 (t2·w), w = u − ¼, written out for 2×2
    let g = |u: [f64; 2]| {
        let a = [[-0.9, -0.8], [0.3, 1.2]];
        let b = [[0.9, 0.7], [-0.3, -0.3]];
        let c = [u[0].cos(), u[1].cos()];
        let s = [1.0 / (1.0 + (-u[0]).exp()), 1.0 / (1.0 + (-u[1]).exp())];
        let t1 = [a[0][0] * c[0] + a[0][1] * c[1], a[1][0] * c[0] + a[1][1] * c[1]];
        let t2 = [b[0][0] * s[0] + b[0][1] * s[1], b[1][0] * s[0] + b[1][1] * s[1]];
        let w = [u[0] - 0.25, u[1] - 0.25];
        let d1 = t1[0] * w[0] + t1[1] * w[1];
        let d2 = t2[0] * w[0] + t2[1] * w[1];
        [t1[0] * d1 + t2[0] * d2, t1[1] * d1 + t2[1] * d2]
    };
    let (ga, gb) = (g([0.0, 0.7]), g([0.1, 0.9]));
    let by_hand = (ga[0] - gb[0]) * (-0.1) + (ga[1] - gb[1]) * (-0.2);
    let (a, b) = ncvi1::example_matrices();
    let p = ncvi1_from_matrices(a, b, Some(1.0), 0).unwrap();
    assert!((inner(&p.g, &[0.0, 0.7], &[0.1, 0.9]) - by_hand).abs() < 1e-14);
}

#[test]
fn ncvi1_reference_is_zero_of_g() {
    let p = gen_ncvi1(7, 4).unwrap();
    let r = p.reference.as_ref().unwrap();
    assert_eq!(p.g.eval(&r.u).amax(), 0.0);
    assert!((p.theta.eval(&r.u)[0] + 7.0 / 4.0).abs() < 1e-14);
    assert_eq!(p.theta.tau, 7f64.sqrt());
}

#[test]
fn ncvi1_deterministic() {
    let get = |p: &crate::VIProblem| match &p.g.kind {
        MappingKind::NcviOne { a, b } => (a.clone(), b.clone()),
        _ => unreachable!(),
    };
    let x = gen_ncvi1(10, 3).unwrap();
    let y = gen_ncvi1(10, 3).unwrap();
    assert_eq!(get(&x), get(&y));
    assert_eq!(x.g.lipschitz, y.g.lipschitz);
    assert_ne!(get(&x).0, get(&gen_ncvi1(10, 4).unwrap()).0);
    assert!(gen_ncvi1(1, 0).is_err());
}

#[test]
fn ncvi1_jacobian_factor_is_psd() {
    let p = gen_ncvi1(6, 11).unwrap();
    let (a, b) = match &p.g.kind {
        MappingKind::NcviOne { a, b } => (a.clone(), b.clone()),
        _ => unreachable!(),
    };
    let mut s = crate::rng::Stream::new(5, 9);
    for _ in 0..50 {
        let u = DVector::from_fn(6, |_, _| s.uniform());
        let x = DVector::from_fn(6, |_, _| s.normal());
        let t1 = &a * u.map(f64::cos);
        let t2 = &b * u.map(|z| 1.0 / (1.0 + (-z).exp()));
        let quad = t1.dot(&x).powi(2) + t2.dot(&x).powi(2);
        assert!(quad >= 0.0);
    }
}

#[test]
fn ncvi2_eps_witness_is_negative() {
    let g = MappingSpec::new(MappingKind::NcviTwo {
        sharp: DVector::from_element(2, 0.5),
    });
    assert!(inner(&g, &[1.0, 2.0], &[2.0, 1.0]) < 0.0);
    // hand value: G(1,2) = (2, 1.5), G(2,1) = (1.5, 2)
    assert!((inner(&g, &[1.0, 2.0], &[2.0, 1.0]) + 1.0).abs() < 1e-15);
}

#[test]
fn default_rows_rule() {
    assert_eq!(ncvi2::default_rows(100), 2);
    assert_eq!(ncvi2::default_rows(500), 10);
    assert_eq!(ncvi2::default_rows(10), 1);
    assert_eq!(ncvi2::default_rows(80), 2);
}

#[test]
fn ncvi2_half_point_feasible() {
    let p = gen_ncvi2(100, 1).unwrap();
    assert_eq!(p.m, 2);
    let half = DVector::from_element(100, 0.5);
    assert!(p.theta.eval(&half).amax() < 1e-12);
    let r = p.reference.as_ref().unwrap();
    assert!(p.g.eval(&r.u).amax() == 0.0);
}

#[test]
fn sharp_point_zero_rows() {
    let a = DMatrix::zeros(1, 3);
    let (u, p) = compute_sharp_point(10.0, &a, &DVector::zeros(1)).unwrap();
    assert!((u - DVector::from_element(3, 1.0)).amax() < 1e-9);
    assert!(p.amax() < 1e-9);
}

#[test]
fn sharp_point_inactive_row() {
    let a = DMatrix::from_row_slice(1, 2, &[1.0, -2.0]);
    let b = DVector::from_element(1, 0.0);
    let (u, p) = compute_sharp_point(10.0, &a, &b).unwrap();
    assert!((u - DVector::from_element(2, 1.0)).amax() < 1e-8);
    assert!(p.amax() < 1e-8);
}

/// `max_{p ≥ 0} min_{u ∈ box} ‖u − 1‖₁ + p(a·u − b)`; the inner minimum of
/// each piecewise-linear term sits at a kink or an endpoint.
fn dual_value(a: &[f64], b: f64, w: f64, p: f64) -> f64 {
    let mut v = -p * b;
    for &ai in a {
        v += [-w, 1.0, w]
            .iter()
            .map(|&x| (x - 1.0f64).abs() + p * ai * x)
            .fold(f64::INFINITY, f64::min);
    }
    v
}

#[test]
fn sharp_point_matches_dual_oracle() {
    let mut s = crate::rng::Stream::new(21, 1);
    let mut a: Vec<f64> = (0..4).map(|_| s.normal()).collect();
    if a.iter().sum::<f64>() < 0.0 {
        a.iter_mut().for_each(|x| *x = -*x);
    }
    let b = 0.5 * a.iter().sum::<f64>();
    let am = DMatrix::from_row_slice(1, 4, &a);
    let (u, p) = compute_sharp_point(10.0, &am, &DVector::from_element(1, b)).unwrap();
    let pmax = 10.0 / a.iter().fold(f64::INFINITY, |m, x| m.min(x.abs()));
    let p_opt = golden_section(|t| -dual_value(&a, b, 10.0, t), 0.0, pmax, 1e-12);
    let d_opt = dual_value(&a, b, 10.0, p_opt);
    let primal = u.iter().map(|x| (x - 1.0).abs()).sum::<f64>();
    assert!((primal - d_opt).abs() < 1e-6, "{primal} vs {d_opt}");
    assert!(am.row(0).dot(&u.transpose()) - b < 1e-8);
    assert!((p[0] - p_opt).abs() < 1e-4, "{} vs {p_opt}", p[0]);
}

#[test]
fn affine_reference_is_exact() {
    for kind in [AffineKind::PsdLinear, AffineKind::StronglyMonotone] {
        for (n, m) in [(6, 3), (9, 0), (20, 4)] {
            let p = gen_monotone_affine(n, m, 2, kind).unwrap();
            let r = p.reference.as_ref().unwrap();
            let res = kkt_residual(&r.u, &r.p, &p).unwrap();
            assert!(res.value <= 1e-12 && res.complementarity <= 1e-12, "{kind:?} {n} {m}: {res:?}");
        }
    }
}

#[test]
fn affine_identity_case() {
    // Q = I, c = −u*, no rows: stationarity pins u = u*
    let u_star = DVector::from_vec(vec![0.3, -0.2]);
    let g = MappingSpec::new(MappingKind::Affine {
        q: DMatrix::identity(2, 2),
        c: -&u_star,
    });
    assert!(g.eval(&u_star).amax() < 1e-15);
}

#[test]
fn affine_kind_round_trip() {
    for k in [AffineKind::PsdLinear, AffineKind::StronglyMonotone] {
        assert_eq!(AffineKind::parse(k.as_str()).unwrap(), k);
    }
    assert!(AffineKind::parse("nope").is_err());
}

#[test]
fn ncvi1_lipschitz_dominates_dense_resample() {
    let p = gen_ncvi1(10, 7).unwrap();
    let est = p.g.lipschitz.unwrap();
    // independent resampling: 10× as many uniform pairs plus close pairs
    let mut s = crate::rng::Stream::new(99, 17);
    let mut best: f64 = 0.0;
    for _ in 0..10 * LIPSCHITZ_SAMPLES {
        let u = DVector::from_fn(10, |_, _| s.uniform());
        let v = DVector::from_fn(10, |_, _| s.uniform());
        best = best.max((p.g.eval(&u) - p.g.eval(&v)).norm() / (&u - &v).norm());
        let w = DVector::from_fn(10, |i, _| (u[i] + 1e-4 * (s.uniform() - 0.5)).clamp(0.0, 1.0));
        let d = (&u - &w).norm();
        if d > 0.0 {
            best = best.max((p.g.eval(&u) - p.g.eval(&w)).norm() / d);
        }
    }
    assert!(est >= best, "{est} < {best}");
}
