//! The primal-dual iteration and its parameters.

pub mod engine;
pub mod lipschitz;
pub mod params;
pub mod subproblem;

pub use engine::{alavi_run, alavi_run_with, alavi_step, alavi_step_linearized, IterateState, RunOptions, StopRule};
pub use lipschitz::estimate_lipschitz;
pub use params::{resolve_params, resolve_with, DerivedConstants, ParamRequest, SolverParams};
pub use subproblem::{solve_primal_subproblem, ConstraintTerm, InnerTolerance, Strategy};
