//! Refutation-only sampling against the generalized monotonicity classes.

use std::fmt;

use nalgebra::DVector;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::problem::{ReferencePoint, VIProblem};
use crate::rng::{streams, Stream};

/// Default refutation tolerance.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Half-width of the sampling window along unbounded coordinates.
pub const SAMPLE_WINDOW: f64 = 5.0;
/// Offset of the near pairs.
pub const NEAR_SCALE: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MonotonicityClass {
    Monotone,
    CoCoercive,
    StarMonotone,
    PseudoMonotone,
    JPseudoMonotone,
    /// Pseudo-monotone with `J + ⟨p*, Θ⟩` as the shift.
    LagrangianPseudoMonotone,
    QuasiMonotone,
    JQuasiMonotone,
    LagrangianQuasiMonotone,
}

impl MonotonicityClass {
    pub const ALL: [MonotonicityClass; 9] = [
        MonotonicityClass::Monotone,
        MonotonicityClass::CoCoercive,
        MonotonicityClass::StarMonotone,
        MonotonicityClass::PseudoMonotone,
        MonotonicityClass::JPseudoMonotone,
        MonotonicityClass::LagrangianPseudoMonotone,
        MonotonicityClass::QuasiMonotone,
        MonotonicityClass::JQuasiMonotone,
        MonotonicityClass::LagrangianQuasiMonotone,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            MonotonicityClass::Monotone => "monotone",
            MonotonicityClass::CoCoercive => "co-coercive",
            MonotonicityClass::StarMonotone => "star-monotone",
            MonotonicityClass::PseudoMonotone => "pseudo-monotone",
            MonotonicityClass::JPseudoMonotone => "j-pseudo-monotone",
            MonotonicityClass::LagrangianPseudoMonotone => "j-lagrangian-pseudo-monotone",
            MonotonicityClass::QuasiMonotone => "quasi-monotone",
            MonotonicityClass::JQuasiMonotone => "j-quasi-monotone",
            MonotonicityClass::LagrangianQuasiMonotone => "j-lagrangian-quasi-monotone",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::Parse(format!("unknown monotonicity class `{s}`")))
    }

    /// Implication classes test their conclusion only where the premise holds.
    pub fn premise(&self) -> Premise {
        use MonotonicityClass::*;
        match self {
            Monotone | CoCoercive | StarMonotone => Premise::None,
            PseudoMonotone | JPseudoMonotone | LagrangianPseudoMonotone => Premise::NonNegative,
            QuasiMonotone | JQuasiMonotone | LagrangianQuasiMonotone => Premise::Positive,
        }
    }

    /// Needs the reference point (`u*` or `p*`).
    pub fn needs_reference(&self) -> bool {
        matches!(
            self,
            MonotonicityClass::StarMonotone
                | MonotonicityClass::LagrangianPseudoMonotone
                | MonotonicityClass::LagrangianQuasiMonotone
        )
    }
}

impl fmt::Display for MonotonicityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Premise {
    None,
    /// `≥ 0`, evaluated exactly.
    NonNegative,
    /// `> tol`.
    Positive,
}

/// One ordered pair evaluated against a class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairValue {
    pub premise: Option<f64>,
    /// The quantity required to be nonnegative.
    pub value: f64,
    /// Magnitude of the terms in `value`, for relative thresholds.
    pub scale: f64,
}

impl PairValue {
    pub fn premise_holds(&self, kind: Premise, tol: f64) -> bool {
        match (kind, self.premise) {
            (Premise::None, _) => true,
            (Premise::NonNegative, Some(p)) => p >= 0.0,
            (Premise::Positive, Some(p)) => p > tol,
            _ => false,
        }
    }

    pub fn threshold(&self, tol: f64) -> f64 {
        -tol * (1.0 + self.scale)
    }

    pub fn refutes(&self, kind: Premise, tol: f64) -> bool {
        self.premise_holds(kind, tol) && self.value < self.threshold(tol)
    }
}

/// Evaluates the defining inequality of `class` at the ordered pair `(u, v)`.
/// The star class ignores `v` and uses the reference point instead. Returns
/// `None` when the class needs a reference and none is given.
pub fn evaluate_pair(
    problem: &VIProblem,
    class: MonotonicityClass,
    u: &DVector<f64>,
    v: &DVector<f64>,
    reference: Option<&ReferencePoint>,
    mu: f64,
) -> Option<PairValue> {
    use MonotonicityClass::*;
    if class.needs_reference() && reference.is_none() {
        return None;
    }
    let g = &problem.g;
    let out = match class {
        Monotone | CoCoercive => {
            let dg = g.eval(u) - g.eval(v);
            let d = u - v;
            let inner = dg.dot(&d);
            let pen = if class == CoCoercive { mu * dg.norm_squared() } else { 0.0 };
            PairValue {
                premise: None,
                value: inner - pen,
                scale: dg.abs().dot(&d.abs()) + pen,
            }
        }
        StarMonotone => {
            let star = &reference?.u;
            let dg = g.eval(u) - g.eval(star);
            let d = u - star;
            PairValue {
                premise: None,
                value: dg.dot(&d),
                scale: dg.abs().dot(&d.abs()),
            }
        }
        _ => {
            let d = v - u;
            let gu = g.eval(u);
            let gv = g.eval(v);
            let mut shift = 0.0;
            let mut shift_scale = 0.0;
            if !matches!(class, PseudoMonotone | QuasiMonotone) {
                let (jv, ju) = (problem.j.value(v), problem.j.value(u));
                shift += jv - ju;
                shift_scale += jv.abs() + ju.abs();
            }
            if matches!(class, LagrangianPseudoMonotone | LagrangianQuasiMonotone) {
                let p = &reference?.p;
                let (tv, tu) = (p.dot(&problem.theta.eval(v)), p.dot(&problem.theta.eval(u)));
                shift += tv - tu;
                shift_scale += tv.abs() + tu.abs();
            }
            PairValue {
                premise: Some(gu.dot(&d) + shift),
                value: gv.dot(&d) + shift,
                scale: gv.abs().dot(&d.abs()) + shift_scale,
            }
        }
    };
    Some(out)
}

#[derive(Debug, Clone)]
pub struct ClassifyOptions {
    /// Random pairs; each is tested in both orders.
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
    /// Co-coercivity modulus; defaults to `1/L` when `L` is known, else `1e−6`.
    pub mu: Option<f64>,
    pub window: f64,
    /// Pairs always tested, e.g. known witnesses.
    pub extra_pairs: Vec<(DVector<f64>, DVector<f64>)>,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            samples: 10_000,
            seed: 0,
            tol: DEFAULT_TOL,
            mu: None,
            window: SAMPLE_WINDOW,
            extra_pairs: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Refuted,
    NotRefuted,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassResult {
    pub verdict: Verdict,
    pub witness_u: Option<Vec<f64>>,
    pub witness_v: Option<Vec<f64>>,
    /// Smallest value over pairs meeting the premise; `None` if none did.
    pub margin: Option<f64>,
    /// Ordered pairs meeting the premise.
    pub premise_hits: usize,
    pub samples: usize,
    pub seed: u64,
}

impl ClassResult {
    pub fn refuted(&self) -> bool {
        self.verdict == Verdict::Refuted
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SamplingConfig {
    pub pairs: usize,
    pub seed: u64,
    pub tol: f64,
    pub mu: f64,
    pub domain: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityReport {
    pub results: Vec<(MonotonicityClass, ClassResult)>,
    pub sampling: SamplingConfig,
}

impl MonotonicityReport {
    pub fn get(&self, class: MonotonicityClass) -> &ClassResult {
        // every class is always present
        &self.results.iter().find(|(c, _)| *c == class).expect("class present").1
    }
}

impl Serialize for MonotonicityReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.results.len() + 1))?;
        for (c, r) in &self.results {
            map.serialize_entry(c.as_str(), r)?;
        }
        map.serialize_entry("sampling", &self.sampling)?;
        map.end()
    }
}

struct Tally {
    class: MonotonicityClass,
    best: Option<(f64, DVector<f64>, DVector<f64>)>,
    margin: Option<f64>,
    hits: usize,
    refuted: bool,
}

/// Sampling classification. Every class sees the same ordered pairs, so
/// a pair refuting pseudo-monotonicity also refutes monotonicity.
pub fn classify(problem: &VIProblem, reference: Option<&ReferencePoint>, opts: &ClassifyOptions) -> Result<MonotonicityReport> {
    let n = problem.n;
    if !(opts.tol >= 0.0 && opts.tol.is_finite()) {
        return Err(Error::Parameter(format!("tol must be finite and nonnegative, got {}", opts.tol)));
    }
    if let Some(r) = reference {
        if r.u.len() != n || r.p.len() != problem.m {
            return Err(Error::Dimension {
                context: "classify reference",
                expected: n,
                got: r.u.len(),
            });
        }
    }
    for (u, v) in &opts.extra_pairs {
        if u.len() != n || v.len() != n {
            return Err(Error::Dimension {
                context: "classify extra pair",
                expected: n,
                got: u.len().min(v.len()),
            });
        }
    }
    let mu = opts.mu.unwrap_or(match problem.g.lipschitz {
        Some(l) if l > 0.0 => 1.0 / l,
        _ => 1e-6,
    });
    let domain: Vec<(f64, f64)> = (0..n).map(|i| problem.feasible.sampling_window(i, opts.window)).collect();

    let mut tallies: Vec<Tally> = MonotonicityClass::ALL
        .iter()
        .map(|&class| Tally {
            class,
            best: None,
            margin: None,
            hits: 0,
            refuted: false,
        })
        .collect();
    let mut evaluated = 0usize;
    let mut visit = |u: &DVector<f64>, v: &DVector<f64>| {
        evaluated += 1;
        for t in tallies.iter_mut() {
            let Some(pv) = evaluate_pair(problem, t.class, u, v, reference, mu) else {
                continue;
            };
            let kind = t.class.premise();
            if !pv.premise_holds(kind, opts.tol) || !pv.value.is_finite() {
                continue;
            }
            t.hits += 1;
            t.margin = Some(t.margin.map_or(pv.value, |m: f64| m.min(pv.value)));
            if pv.refutes(kind, opts.tol) && t.best.as_ref().is_none_or(|(b, _, _)| pv.value < *b) {
                t.best = Some((pv.value, u.clone(), v.clone()));
                t.refuted = true;
            }
        }
    };

    for (u, v) in &opts.extra_pairs {
        visit(u, v);
        visit(v, u);
    }
    let mut s = Stream::new(opts.seed, streams::AUX);
    let draw = |s: &mut Stream| DVector::from_fn(n, |i, _| s.uniform_in(domain[i].0, domain[i].1));
    let vertex = |s: &mut Stream| DVector::from_fn(n, |i, _| if s.uniform() < 0.5 { domain[i].0 } else { domain[i].1 });
    for t in 0..opts.samples {
        // mostly uniform pairs, with boundary and near pairs mixed in
        let (u, v) = match t % 4 {
            0 | 1 => (draw(&mut s), draw(&mut s)),
            2 => (vertex(&mut s), draw(&mut s)),
            _ => {
                let u = if s.uniform() < 0.5 { vertex(&mut s) } else { draw(&mut s) };
                let v = DVector::from_fn(n, |i, _| {
                    let span = domain[i].1 - domain[i].0;
                    (u[i] + NEAR_SCALE * span * (2.0 * s.uniform() - 1.0)).clamp(domain[i].0, domain[i].1)
                });
                (u, v)
            }
        };
        visit(&u, &v);
        visit(&v, &u);
    }

    let results = tallies
        .into_iter()
        .map(|t| {
            let skipped = t.class.needs_reference() && reference.is_none();
            let verdict = if skipped {
                Verdict::Skipped
            } else if t.refuted {
                Verdict::Refuted
            } else {
                Verdict::NotRefuted
            };
            let (wu, wv) = match &t.best {
                Some((_, u, v)) => (Some(u.as_slice().to_vec()), Some(v.as_slice().to_vec())),
                None => (None, None),
            };
            let margin = match &t.best {
                Some((b, _, _)) => Some(*b),
                None => t.margin,
            };
            (
                t.class,
                ClassResult {
                    verdict,
                    witness_u: wu,
                    witness_v: wv,
                    margin,
                    premise_hits: t.hits,
                    samples: evaluated,
                    seed: opts.seed,
                },
            )
        })
        .collect();
    Ok(MonotonicityReport {
        results,
        sampling: SamplingConfig {
            pairs: evaluated,
            seed: opts.seed,
            tol: opts.tol,
            mu,
            domain,
        },
    })
}
