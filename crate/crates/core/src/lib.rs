//! Augmented-Lagrangian primal-dual solver for conically constrained, possibly
//! non-monotone mixed variational inequalities, with convergence diagnostics,
//! a generalized-monotonicity classifier and seeded instance generators.

pub mod certify;
pub mod cone;
pub mod constraint;
pub mod error;
pub mod feasible;
pub mod instances;
pub mod io;
pub mod mapping;
pub mod monotonicity;
pub mod phi;
pub mod problem;
pub mod prox;
pub mod rng;
pub mod solver;

#[cfg(test)]
mod oracle;

pub use cone::{project_dual_cone, ConeSpec};
pub use constraint::{ConstraintForm, ConstraintMap, TauRule};
pub use error::{Error, Result};
pub use feasible::{project_box, FeasibleSet};
pub use mapping::{MappingKind, MappingSpec};
pub use phi::{eval_phi, grad_p, grad_theta};
pub use problem::{ReferencePoint, ReferenceRole, VIProblem};
pub use prox::{prox_apply, ProxFunction, ScalarTerms};
