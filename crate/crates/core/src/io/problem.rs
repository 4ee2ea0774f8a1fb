//! Problem-definition JSON.
//!
//! ```json
//! { "n": 2, "m": 1,
//!   "G": { "kind": "affine", "params": { "q": [[1,0],[0,1]], "c": [0,0] }, "lipschitz": 1 },
//!   "J": { "kind": "zero" },
//!   "theta": { "kind": "affine", "A": [[1,1]], "b": [1] },
//!   "cone": { "kind": "nonneg-orthant" },
//!   "feasible": { "kind": "box", "lo": [0, "-inf"], "hi": [1, "inf"] } }
//! ```
//!
//! Any matrix may be replaced by `{ "csv": "file.csv" }`, resolved against
//! the directory of the JSON file.

use std::path::{Path, PathBuf};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::cone::ConeSpec;
use crate::constraint::{ConstraintForm, ConstraintMap, TauRule};
use crate::error::{Error, Result};
use crate::feasible::FeasibleSet;
use crate::mapping::{MappingKind, MappingSpec};
use crate::problem::{ReferencePoint, ReferenceRole, VIProblem};
use crate::prox::ProxFunction;

use super::matrix::{parse_matrix_csv, write_matrix_csv};

/// Largest accepted `n` or `m`.
pub const MAX_DIM: usize = 10_000_000;
/// Primal feasibility tolerance for a stored reference point.
pub const REFERENCE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixDoc {
    Rows(Vec<Vec<f64>>),
    File { csv: String },
}

/// A bound: a number, or `"inf"` / `"-inf"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Bound {
    Num(f64),
    Text(String),
}

impl Bound {
    pub fn from_f64(x: f64) -> Self {
        if x == f64::INFINITY {
            Bound::Text("inf".into())
        } else if x == f64::NEG_INFINITY {
            Bound::Text("-inf".into())
        } else {
            Bound::Num(x)
        }
    }

    pub fn value(&self) -> Result<f64> {
        match self {
            Bound::Num(x) if x.is_finite() => Ok(*x),
            Bound::Num(x) => Err(Error::Parse(format!("bound {x} is not finite"))),
            Bound::Text(s) => match s.as_str() {
                "inf" | "+inf" | "Infinity" => Ok(f64::INFINITY),
                "-inf" | "-Infinity" => Ok(f64::NEG_INFINITY),
                other => Err(Error::Parse(format!("unknown bound `{other}`"))),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "kebab-case")]
pub enum MappingKindDoc {
    Zero,
    Affine { q: MatrixDoc, c: Vec<f64> },
    Ncvi1 { a: MatrixDoc, b: MatrixDoc },
    Ncvi2 { sharp: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MappingDoc {
    #[serde(flatten)]
    pub kind: MappingKindDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lipschitz: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "kebab-case")]
pub enum ProxDoc {
    Zero,
    WeightedL1 { center: Vec<f64>, weight: f64 },
    Linear { g: Vec<f64> },
    BoxIndicator { lo: Vec<Bound>, hi: Vec<Bound> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ThetaDoc {
    /// `Θ(u) = Au − b`.
    Affine {
        #[serde(rename = "A")]
        a: MatrixDoc,
        b: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tau: Option<f64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ConeDoc {
    NonnegOrthant,
    Zero,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FeasibleDoc {
    Box { lo: Vec<Bound>, hi: Vec<Bound> },
    WholeSpace,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceDoc {
    pub u: Vec<f64>,
    pub p: Vec<f64>,
    pub role: String,
}

impl ReferenceDoc {
    pub fn from_point(r: &ReferencePoint) -> Self {
        ReferenceDoc {
            u: r.u.as_slice().to_vec(),
            p: r.p.as_slice().to_vec(),
            role: r.role.as_str().into(),
        }
    }

    pub fn to_point(&self) -> Result<ReferencePoint> {
        finite("reference u", &self.u)?;
        finite("reference p", &self.p)?;
        Ok(ReferencePoint::new(
            DVector::from_column_slice(&self.u),
            DVector::from_column_slice(&self.p),
            ReferenceRole::parse(&self.role)?,
        ))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemDoc {
    pub n: usize,
    pub m: usize,
    #[serde(rename = "G")]
    pub g: MappingDoc,
    #[serde(rename = "J")]
    pub j: ProxDoc,
    pub theta: ThetaDoc,
    pub cone: ConeDoc,
    pub feasible: FeasibleDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_point: Option<ReferenceDoc>,
}

fn finite(what: &str, xs: &[f64]) -> Result<()> {
    if xs.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::Parse(format!("{what} has a non-finite entry")))
    }
}

fn expect_len(what: &str, expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::Parse(format!("{what}: expected length {expected}, got {got}")))
    }
}

/// Where `{ "csv": … }` references are resolved. `None` forbids them.
fn load_matrix(doc: &MatrixDoc, rows: usize, cols: usize, base: Option<&Path>, what: &str) -> Result<DMatrix<f64>> {
    let m = match doc {
        MatrixDoc::Rows(r) => {
            if r.len() != rows {
                return Err(Error::Parse(format!("{what}: expected {rows} rows, got {}", r.len())));
            }
            for row in r {
                expect_len(what, cols, row.len())?;
                finite(what, row)?;
            }
            DMatrix::from_fn(rows, cols, |i, j| r[i][j])
        }
        MatrixDoc::File { csv } => {
            let base = base.ok_or_else(|| Error::Parse(format!("{what}: external csv `{csv}` not allowed here")))?;
            let path = base.join(csv);
            let text = std::fs::read_to_string(&path)
                .map_err(|e| Error::Parse(format!("{what}: cannot read {}: {e}", path.display())))?;
            let m = parse_matrix_csv(&text)?;
            if rows == 0 && m.nrows() == 0 {
                return Ok(DMatrix::zeros(0, cols));
            }
            m
        }
    };
    if m.shape() != (rows, cols) {
        return Err(Error::Parse(format!(
            "{what}: expected {rows}×{cols}, got {}×{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(m)
}

fn bounds(what: &str, xs: &[Bound], n: usize) -> Result<DVector<f64>> {
    expect_len(what, n, xs.len())?;
    let v: Result<Vec<f64>> = xs.iter().map(Bound::value).collect();
    Ok(DVector::from_vec(v?))
}

impl ProblemDoc {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("problem json: {e}")))
    }

    /// Builds the problem; `base` is the directory for external matrices.
    pub fn to_problem(&self, base: Option<&Path>) -> Result<VIProblem> {
        let (n, m) = (self.n, self.m);
        if n == 0 || n > MAX_DIM || m > MAX_DIM {
            return Err(Error::Parse(format!("dimensions out of range: n={n}, m={m}")));
        }
        let kind = match &self.g.kind {
            MappingKindDoc::Zero => MappingKind::Zero { n },
            MappingKindDoc::Affine { q, c } => {
                expect_len("G.c", n, c.len())?;
                finite("G.c", c)?;
                MappingKind::Affine {
                    q: load_matrix(q, n, n, base, "G.q")?,
                    c: DVector::from_column_slice(c),
                }
            }
            MappingKindDoc::Ncvi1 { a, b } => MappingKind::NcviOne {
                a: load_matrix(a, n, n, base, "G.a")?,
                b: load_matrix(b, n, n, base, "G.b")?,
            },
            MappingKindDoc::Ncvi2 { sharp } => {
                expect_len("G.sharp", n, sharp.len())?;
                finite("G.sharp", sharp)?;
                MappingKind::NcviTwo {
                    sharp: DVector::from_column_slice(sharp),
                }
            }
        };
        let mut g = MappingSpec::new(kind);
        if let Some(l) = self.g.lipschitz {
            if !(l.is_finite() && l >= 0.0) {
                return Err(Error::Parse(format!("G.lipschitz must be finite and nonnegative, got {l}")));
            }
            g = g.with_lipschitz(l);
        }
        let j = match &self.j {
            ProxDoc::Zero => ProxFunction::Zero { n },
            ProxDoc::WeightedL1 { center, weight } => {
                expect_len("J.center", n, center.len())?;
                finite("J.center", center)?;
                if !(weight.is_finite() && *weight >= 0.0) {
                    return Err(Error::Parse(format!("J.weight must be finite and nonnegative, got {weight}")));
                }
                ProxFunction::WeightedL1 {
                    center: DVector::from_column_slice(center),
                    weight: *weight,
                }
            }
            ProxDoc::Linear { g } => {
                expect_len("J.g", n, g.len())?;
                finite("J.g", g)?;
                ProxFunction::Linear {
                    g: DVector::from_column_slice(g),
                }
            }
            ProxDoc::BoxIndicator { lo, hi } => {
                let (lo, hi) = (bounds("J.lo", lo, n)?, bounds("J.hi", hi, n)?);
                if lo.iter().zip(hi.iter()).any(|(l, h)| l > h) {
                    return Err(Error::Parse("J box requires lo <= hi".into()));
                }
                ProxFunction::BoxIndicator { lo, hi }
            }
        };
        let theta = match &self.theta {
            ThetaDoc::Affine { a, b, tau } => {
                expect_len("theta.b", m, b.len())?;
                finite("theta.b", b)?;
                let a = load_matrix(a, m, n, base, "theta.A")?;
                let b = DVector::from_column_slice(b);
                match tau {
                    Some(t) => ConstraintMap::affine_with_tau(a, b, *t)?,
                    None => ConstraintMap::affine(a, b, TauRule::Frobenius)?,
                }
            }
        };
        let cone = match self.cone {
            ConeDoc::NonnegOrthant => ConeSpec::NonnegOrthant { m },
            ConeDoc::Zero => ConeSpec::ZeroCone { m },
        };
        let feasible = match &self.feasible {
            FeasibleDoc::Box { lo, hi } => FeasibleSet::new_box(bounds("feasible.lo", lo, n)?, bounds("feasible.hi", hi, n)?)?,
            FeasibleDoc::WholeSpace => FeasibleSet::WholeSpace { n },
        };
        let prob = VIProblem::new(g, j, theta, cone, feasible)?;
        match &self.reference_point {
            Some(r) => prob.with_reference_tol(r.to_point()?, REFERENCE_TOL),
            None => Ok(prob),
        }
    }

    /// Describes `problem`. Matrices with more than `inline_limit` entries go
    /// to `sink` (named by role) when one is given.
    pub fn from_problem(problem: &VIProblem, sink: Option<&mut MatrixSink>) -> Result<Self> {
        let mut sink = sink;
        let mut put = |name: &str, mat: &DMatrix<f64>| -> Result<MatrixDoc> {
            match sink.as_deref_mut() {
                Some(s) if mat.len() > s.inline_limit => s.store(name, mat),
                _ => Ok(MatrixDoc::Rows(
                    (0..mat.nrows()).map(|i| mat.row(i).iter().copied().collect()).collect(),
                )),
            }
        };
        let kind = match &problem.g.kind {
            MappingKind::Zero { .. } => MappingKindDoc::Zero,
            MappingKind::Affine { q, c } => MappingKindDoc::Affine {
                q: put("G_q", q)?,
                c: c.as_slice().to_vec(),
            },
            MappingKind::NcviOne { a, b } => MappingKindDoc::Ncvi1 {
                a: put("G_a", a)?,
                b: put("G_b", b)?,
            },
            MappingKind::NcviTwo { sharp } => MappingKindDoc::Ncvi2 {
                sharp: sharp.as_slice().to_vec(),
            },
            MappingKind::Custom { label, .. } => {
                return Err(Error::Capability(format!("custom mapping `{label}` cannot be written to a file")))
            }
        };
        let j = match &problem.j {
            ProxFunction::Zero { .. } => ProxDoc::Zero,
            ProxFunction::WeightedL1 { center, weight } => ProxDoc::WeightedL1 {
                center: center.as_slice().to_vec(),
                weight: *weight,
            },
            ProxFunction::Linear { g } => ProxDoc::Linear {
                g: g.as_slice().to_vec(),
            },
            ProxFunction::BoxIndicator { lo, hi } => ProxDoc::BoxIndicator {
                lo: lo.iter().map(|&x| Bound::from_f64(x)).collect(),
                hi: hi.iter().map(|&x| Bound::from_f64(x)).collect(),
            },
            ProxFunction::CustomSeparable { label, .. } => {
                return Err(Error::Capability(format!("custom J `{label}` cannot be written to a file")))
            }
        };
        let theta = match &problem.theta.form {
            ConstraintForm::Affine { a, b } => ThetaDoc::Affine {
                a: put("theta_A", a)?,
                b: b.as_slice().to_vec(),
                tau: Some(problem.theta.tau),
            },
            ConstraintForm::General { .. } => {
                return Err(Error::Capability("a general constraint map cannot be written to a file".into()))
            }
        };
        let cone = match problem.cone {
            ConeSpec::NonnegOrthant { .. } => ConeDoc::NonnegOrthant,
            ConeSpec::ZeroCone { .. } => ConeDoc::Zero,
        };
        let feasible = match &problem.feasible {
            FeasibleSet::Box { lo, hi } => FeasibleDoc::Box {
                lo: lo.iter().map(|&x| Bound::from_f64(x)).collect(),
                hi: hi.iter().map(|&x| Bound::from_f64(x)).collect(),
            },
            FeasibleSet::WholeSpace { .. } => FeasibleDoc::WholeSpace,
        };
        Ok(ProblemDoc {
            n: problem.n,
            m: problem.m,
            g: MappingDoc {
                kind,
                lipschitz: problem.g.lipschitz,
            },
            j,
            theta,
            cone,
            feasible,
            reference_point: problem.reference.as_ref().map(ReferenceDoc::from_point),
        })
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Parse(format!("problem json: {e}")))
    }
}

/// Compact JSON of the fully inlined description; the basis of problem hashes.
pub fn canonical_problem_json(problem: &VIProblem) -> Result<String> {
    let doc = ProblemDoc::from_problem(problem, None)?;
    serde_json::to_string(&doc).map_err(|e| Error::Parse(format!("problem json: {e}")))
}

/// Writes large matrices as CSV files next to the problem JSON.
#[derive(Debug)]
pub struct MatrixSink {
    pub dir: PathBuf,
    pub inline_limit: usize,
    pub written: Vec<PathBuf>,
}

impl MatrixSink {
    pub fn new(dir: impl Into<PathBuf>, inline_limit: usize) -> Self {
        MatrixSink {
            dir: dir.into(),
            inline_limit,
            written: Vec::new(),
        }
    }

    fn store(&mut self, name: &str, mat: &DMatrix<f64>) -> Result<MatrixDoc> {
        let file = format!("{name}.csv");
        let path = self.dir.join(&file);
        std::fs::write(&path, write_matrix_csv(mat))?;
        self.written.push(path);
        Ok(MatrixDoc::File { csv: file })
    }
}

/// Reads a problem JSON file, resolving matrix references beside it.
pub fn read_problem(path: &Path) -> Result<VIProblem> {
    let text = std::fs::read_to_string(path)?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    ProblemDoc::parse(&text)?.to_problem(Some(base))
}

/// Writes `problem.json` (and matrix CSVs) into `dir`; returns the JSON path.
pub fn write_problem(problem: &VIProblem, dir: &Path, inline_limit: usize) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let mut sink = MatrixSink::new(dir, inline_limit);
    let doc = ProblemDoc::from_problem(problem, Some(&mut sink))?;
    let path = dir.join("problem.json");
    std::fs::write(&path, doc.to_json()? + "\n")?;
    Ok(path)
}
