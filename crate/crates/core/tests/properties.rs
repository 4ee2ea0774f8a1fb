//! Property tests for projections, the augmented term, the primal step, the
//! iteration, parameter resolution, the classifier and the generators.

use alavi_core::instances::{gen_monotone_affine, gen_ncvi1, gen_ncvi2, AffineKind};
use alavi_core::io::canonical_problem_json;
use alavi_core::monotonicity::{classify, evaluate_pair, ClassifyOptions, MonotonicityClass, Verdict};
use alavi_core::solver::engine::IterateState;
use alavi_core::solver::{
    alavi_step, resolve_params, resolve_with, solve_primal_subproblem, ConstraintTerm, InnerTolerance, ParamRequest,
    Strategy as Inner,
};
use alavi_core::{
    eval_phi, grad_p, grad_theta, ConeSpec, ConstraintMap, FeasibleSet, MappingSpec, ProxFunction, TauRule, VIProblem,
};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn vec_of(len: usize, lo: f64, hi: f64) -> impl Strategy<Value = DVector<f64>> {
    prop::collection::vec(lo..hi, len).prop_map(DVector::from_vec)
}

fn pair_of(lo: f64, hi: f64) -> impl Strategy<Value = (DVector<f64>, DVector<f64>)> {
    (1usize..8).prop_flat_map(move |n| (vec_of(n, lo, hi), vec_of(n, lo, hi)))
}

fn cone_for(m: usize, zero: bool) -> ConeSpec {
    if zero {
        ConeSpec::ZeroCone { m }
    } else {
        ConeSpec::NonnegOrthant { m }
    }
}

/// `(θ, p, γ)` with `p` already in the dual cone.
fn phi_triple() -> impl Strategy<Value = (DVector<f64>, DVector<f64>, f64, bool)> {
    (1usize..6, any::<bool>()).prop_flat_map(|(m, zero)| {
        (vec_of(m, -5.0, 5.0), vec_of(m, -5.0, 5.0), 0.05f64..3.0, Just(zero)).prop_map(move |(t, p, g, z)| {
            // strictly inside the orthant, so differences in p stay feasible
            let p = if z { p } else { p.map(|x| x.abs() + 0.01) };
            (t, p, g, z)
        })
    })
}

fn central(f: impl Fn(&DVector<f64>) -> f64, x: &DVector<f64>, h: f64) -> DVector<f64> {
    DVector::from_fn(x.len(), |i, _| {
        let mut a = x.clone();
        let mut b = x.clone();
        a[i] += h;
        b[i] -= h;
        (f(&a) - f(&b)) / (2.0 * h)
    })
}

/// Small random affine problem on a box with a weighted-L1 term.
fn small_problem(seed: u64, n: usize, m: usize) -> VIProblem {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = |rows: usize, cols: usize| DMatrix::from_fn(rows, cols, |_, _| r.random_range(-1.0..1.0));
    let q = draw(n, n);
    let a = draw(m, n);
    let c = draw(n, 1).column(0).into_owned();
    let b = draw(m, 1).column(0).into_owned();
    let center = draw(n, 1).column(0).into_owned();
    VIProblem::new(
        MappingSpec::custom(n, "affine", move |u| &q * u + &c).with_lipschitz(3.0),
        ProxFunction::WeightedL1 { center, weight: 0.7 },
        ConstraintMap::affine(a, b, TauRule::Frobenius).unwrap(),
        ConeSpec::NonnegOrthant { m },
        FeasibleSet::uniform_box(n, -2.0, 1.5).unwrap(),
    )
    .unwrap()
}

proptest! {
    #[test]
    fn box_projection_is_nonexpansive((x, y) in pair_of(-10.0, 10.0), w in 0.1f64..4.0) {
        let n = x.len();
        let set = FeasibleSet::new_box(DVector::from_element(n, -w), DVector::from_element(n, 0.5 * w)).unwrap();
        let d = (set.project(&x) - set.project(&y)).norm();
        prop_assert!(d <= (&x - &y).norm() + 1e-12);
    }

    #[test]
    fn dual_cone_projection_is_nonexpansive((x, y) in pair_of(-10.0, 10.0), zero in any::<bool>()) {
        let cone = cone_for(x.len(), zero);
        let d = (cone.dual_project(&x) - cone.dual_project(&y)).norm();
        prop_assert!(d <= (&x - &y).norm() + 1e-12);
    }

    #[test]
    fn phi_gradients_match_differences((theta, p, gamma, zero) in phi_triple()) {
        let cone = cone_for(theta.len(), zero);
        let shifted = &p + &theta * gamma;
        if !zero {
            // stay away from the kink of the projection
            prop_assume!(shifted.iter().all(|x| x.abs() > 1e-3));
        }
        let h = 1e-6;
        let gt = grad_theta(&theta, &p, gamma, &cone).unwrap();
        let ft = central(|t| eval_phi(t, &p, gamma, &cone).unwrap(), &theta, h);
        prop_assert!((&gt - &ft).norm() <= 1e-5 * (1.0 + gt.norm()), "{gt} vs {ft}");
        let gp = grad_p(&theta, &p, gamma, &cone).unwrap();
        let fp = central(|q| eval_phi(&theta, q, gamma, &cone).unwrap(), &p, h);
        prop_assert!((&gp - &fp).norm() <= 1e-5 * (1.0 + gp.norm()), "{gp} vs {fp}");
    }

    #[test]
    fn phi_convex_in_theta_concave_in_p(
        (t1, p1, gamma, zero) in phi_triple(),
        seed in any::<u64>(),
    ) {
        let m = t1.len();
        let cone = cone_for(m, zero);
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let t2 = DVector::from_fn(m, |_, _| r.random_range(-5.0..5.0));
        let p2 = cone.dual_project(&DVector::from_fn(m, |_, _| r.random_range(-5.0..5.0)));
        let phi = |t: &DVector<f64>, p: &DVector<f64>| eval_phi(t, p, gamma, &cone).unwrap();
        let tm = (&t1 + &t2) / 2.0;
        let convex = (phi(&t1, &p1) + phi(&t2, &p1)) / 2.0 - phi(&tm, &p1);
        prop_assert!(convex >= -1e-10 * (1.0 + phi(&tm, &p1).abs()));
        let pm = (&p1 + &p2) / 2.0;
        let concave = phi(&t1, &pm) - (phi(&t1, &p1) + phi(&t1, &p2)) / 2.0;
        prop_assert!(concave >= -1e-10 * (1.0 + phi(&t1, &pm).abs()));
    }

    #[test]
    fn prox_beats_perturbations(x in vec_of(4, -3.0, 3.0), t in 0.01f64..5.0, kind in 0usize..3, seed in any::<u64>()) {
        let f = match kind {
            0 => ProxFunction::WeightedL1 { center: DVector::from_vec(vec![0.5, -1.0, 0.0, 2.0]), weight: 0.8 },
            1 => ProxFunction::Linear { g: DVector::from_vec(vec![1.0, -2.0, 0.5, 0.0]) },
            _ => ProxFunction::BoxIndicator { lo: DVector::from_element(4, -1.0), hi: DVector::from_element(4, 0.5) },
        };
        let y = f.prox(&x, t);
        let obj = |z: &DVector<f64>| f.value(z) + (z - &x).norm_squared() / (2.0 * t);
        let best = obj(&y);
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..1000 {
            let scale = 10f64.powf(r.random_range(-6.0..0.0));
            let z = &y + DVector::from_fn(4, |_, _| r.random_range(-scale..scale));
            prop_assert!(obj(&z) >= best - 1e-12 * (1.0 + best.abs()));
        }
    }

    #[test]
    fn dual_iterates_stay_in_dual_cone(seed in 0u64..500, steps in 1usize..40) {
        let prob = small_problem(seed, 5, 3);
        let (params, _) = resolve_params(&prob, &ParamRequest::default()).unwrap();
        let mut s = IterateState::new(&prob, DVector::from_element(5, 1.0), DVector::zeros(3)).unwrap();
        for _ in 0..steps {
            s = alavi_step(&s, &prob, &params).unwrap();
            prop_assert_eq!(prob.cone.dual_project(&s.p), s.p.clone());
            prop_assert_eq!(prob.cone.dual_project(&s.q), s.q.clone());
        }
    }

    #[test]
    fn subproblem_decomposes_blockwise(seed in any::<u64>(), n1 in 1usize..5, n2 in 1usize..5, alpha in 0.01f64..2.0) {
        let n = n1 + n2;
        let m = 3;
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let mut draw = |k: usize| DVector::from_fn(k, |_, _| r.random_range(-2.0..2.0));
        let (g, v, q0, center, lo_shift) = (draw(n), draw(n), draw(m), draw(n), draw(n));
        let a = DMatrix::from_fn(m, n, |i, j| ((i * 7 + j * 3) as f64).sin());
        let lo = lo_shift.map(|x: f64| -1.0 - x.abs());
        let hi = lo_shift.map(|x: f64| 0.5 + x.abs());
        let q = ConeSpec::NonnegOrthant { m }.dual_project(&q0);
        let build = |cols: std::ops::Range<usize>| {
            let k = cols.len();
            VIProblem::new(
                MappingSpec::custom(k, "zero", move |_| DVector::zeros(k)),
                ProxFunction::WeightedL1 { center: center.rows(cols.start, k).into_owned(), weight: 0.3 },
                ConstraintMap::affine(a.columns(cols.start, k).into_owned(), DVector::zeros(m), TauRule::Frobenius).unwrap(),
                ConeSpec::NonnegOrthant { m },
                FeasibleSet::new_box(lo.rows(cols.start, k).into_owned(), hi.rows(cols.start, k).into_owned()).unwrap(),
            )
            .unwrap()
        };
        let inner = InnerTolerance { tol: 1e-12, iteration: 0 };
        let solve = |p: &VIProblem, s: usize, k: usize| {
            solve_primal_subproblem(
                p,
                &g.rows(s, k).into_owned(),
                &q,
                &v.rows(s, k).into_owned(),
                alpha,
                Inner::Auto,
                ConstraintTerm::Exact,
                inner,
            )
            .unwrap()
        };
        let joint = solve(&build(0..n), 0, n);
        let first = solve(&build(0..n1), 0, n1);
        let second = solve(&build(n1..n), n1, n2);
        for i in 0..n {
            let blockwise = if i < n1 { first[i] } else { second[i - n1] };
            prop_assert!((joint[i] - blockwise).abs() <= 1e-12);
        }
    }

    #[test]
    fn subproblem_output_is_optimal(seed in any::<u64>(), alpha in 0.01f64..2.0, inner_iterative in any::<bool>()) {
        let prob = small_problem(seed, 4, 2);
        let mut r = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37);
        let mut draw = |k: usize| DVector::from_fn(k, |_, _| r.random_range(-2.0..2.0));
        let (g, v) = (draw(4), draw(4));
        let q = prob.cone.dual_project(&draw(2));
        let strategy = if inner_iterative { Inner::InnerIterative } else { Inner::ClosedForm };
        let inner = InnerTolerance { tol: 1e-12, iteration: 0 };
        let u = solve_primal_subproblem(&prob, &g, &q, &v, alpha, strategy, ConstraintTerm::Exact, inner).unwrap();
        let a = match &prob.theta.form {
            alavi_core::ConstraintForm::Affine { a, .. } => a.clone(),
            _ => unreachable!(),
        };
        let smooth_grad = &g + a.tr_mul(&q) + (&u - &v) / alpha;
        let scale = 1.0 + smooth_grad.norm();
        let mut r = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
        for _ in 0..100 {
            let w = prob.feasible.project(&DVector::from_fn(4, |_, _| r.random_range(-3.0..3.0)));
            let slack = smooth_grad.dot(&(&w - &u)) + prob.j.value(&w) - prob.j.value(&u);
            let tol = if inner_iterative { 1e-7 * scale } else { 1e-9 };
            prop_assert!(slack >= -tol, "slack {slack}");
        }
    }

    #[test]
    fn resolution_is_deterministic_and_idempotent(
        l in 0.0f64..1e4,
        tau in 0.0f64..50.0,
        eta in prop::option::of(0.62f64..0.99),
        gamma_frac in prop::option::of(0.05f64..0.95),
    ) {
        let gamma = gamma_frac.map(|f| if tau > 0.0 { f / tau } else { f });
        let req = ParamRequest { eta, gamma, alpha: None };
        let (p1, c1) = resolve_with(l, tau, &req).unwrap();
        let (p2, c2) = resolve_with(l, tau, &req).unwrap();
        prop_assert_eq!(p1, p2);
        prop_assert_eq!(c1, c2);
        let again = ParamRequest { eta: Some(p1.eta), gamma: Some(p1.gamma), alpha: Some(p1.alpha) };
        let (p3, c3) = resolve_with(l, tau, &again).unwrap();
        prop_assert_eq!(p1, p3);
        prop_assert_eq!(c1, c3);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn classifier_respects_hierarchy(c in prop::collection::vec(-2.0f64..2.0, 4), seed in 0u64..1000) {
        let (c0, c1, c2, c3) = (c[0], c[1], c[2], c[3]);
        let prob = VIProblem::new(
            MappingSpec::custom(1, "cubic", move |u| u.map(|x| c0 + c1 * x + c2 * x * x + c3 * x * x * x)),
            ProxFunction::Zero { n: 1 },
            ConstraintMap::affine(DMatrix::zeros(1, 1), DVector::zeros(1), TauRule::Frobenius).unwrap(),
            ConeSpec::NonnegOrthant { m: 1 },
            FeasibleSet::uniform_box(1, -1.0, 1.0).unwrap(),
        )
        .unwrap();
        let opts = ClassifyOptions { samples: 400, seed, ..Default::default() };
        let rep = classify(&prob, None, &opts).unwrap();
        let refuted = |c: MonotonicityClass| rep.get(c).verdict == Verdict::Refuted;
        if !refuted(MonotonicityClass::Monotone) {
            prop_assert!(!refuted(MonotonicityClass::PseudoMonotone));
            prop_assert!(!refuted(MonotonicityClass::QuasiMonotone));
        }
        if !refuted(MonotonicityClass::PseudoMonotone) {
            prop_assert!(!refuted(MonotonicityClass::QuasiMonotone));
        }
        // every witness re-evaluates to a violation
        for (class, res) in &rep.results {
            if res.verdict == Verdict::Refuted {
                let u = DVector::from_vec(res.witness_u.clone().unwrap());
                let v = DVector::from_vec(res.witness_v.clone().unwrap());
                let mu = opts.mu.unwrap_or(1e-6);
                let pv = evaluate_pair(&prob, *class, &u, &v, None, mu).unwrap();
                prop_assert!(pv.refutes(class.premise(), opts.tol), "{}", class.as_str());
            }
        }
    }

    #[test]
    fn monotone_affine_is_never_refuted(seed in 0u64..10_000, n in 2usize..10, psd in any::<bool>()) {
        let kind = if psd { AffineKind::PsdLinear } else { AffineKind::StronglyMonotone };
        let prob = gen_monotone_affine(n, n / 2, seed, kind).unwrap();
        let rep = classify(&prob, prob.reference.as_ref(), &ClassifyOptions { samples: 300, seed, ..Default::default() }).unwrap();
        for (class, res) in &rep.results {
            if *class != MonotonicityClass::CoCoercive {
                prop_assert_ne!(res.verdict, Verdict::Refuted, "{}", class.as_str());
            }
        }
    }

    #[test]
    fn generators_replay_bit_identically(seed in any::<u64>(), n in 2usize..12) {
        let a = canonical_problem_json(&gen_ncvi1(n, seed).unwrap()).unwrap();
        let b = canonical_problem_json(&gen_ncvi1(n, seed).unwrap()).unwrap();
        prop_assert_eq!(a, b);
        let c = canonical_problem_json(&gen_monotone_affine(n, 1, seed, AffineKind::PsdLinear).unwrap()).unwrap();
        let d = canonical_problem_json(&gen_monotone_affine(n, 1, seed, AffineKind::PsdLinear).unwrap()).unwrap();
        prop_assert_eq!(c, d);
    }
}

#[test]
fn ncvi1_coherence_over_samples() {
    let prob = gen_ncvi1(40, 5).unwrap();
    let star = DVector::from_element(40, 0.25);
    let mut r = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10_000 {
        let u = DVector::from_fn(40, |_, _| r.random_range(0.0..1.0));
        let d = &u - &star;
        assert!(prob.g.eval(&u).dot(&d) >= -1e-10);
    }
}

#[test]
fn ncvi2_coherence_over_samples() {
    let prob = gen_ncvi2(100, 1).unwrap();
    let reference = prob.reference.clone().unwrap();
    let (us, ps) = (&reference.u, &reference.p);
    let theta_s = prob.theta.eval(us);
    let js = prob.j.value(us);
    let mut r = ChaCha8Rng::seed_from_u64(12);
    let mut worst = f64::INFINITY;
    for t in 0..10_000 {
        // mix the whole box with points near the sharp point
        let u = if t % 2 == 0 {
            DVector::from_fn(100, |_, _| r.random_range(-10.0..10.0))
        } else {
            let s = 10f64.powf(r.random_range(-6.0..0.0));
            prob.feasible.project(&DVector::from_fn(100, |i, _| us[i] + r.random_range(-s..s)))
        };
        let value = prob.g.eval(&u).dot(&(&u - us)) + prob.j.value(&u) - js + ps.dot(&(prob.theta.eval(&u) - &theta_s));
        worst = worst.min(value);
    }
    assert!(worst >= -1e-8, "{worst}");
}

#[test]
fn generators_are_seed_sensitive() {
    let a = canonical_problem_json(&gen_ncvi1(6, 1).unwrap()).unwrap();
    let b = canonical_problem_json(&gen_ncvi1(6, 2).unwrap()).unwrap();
    assert_ne!(a, b);
}
