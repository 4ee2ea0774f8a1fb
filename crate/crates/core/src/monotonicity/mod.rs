//! Generalized monotonicity: sampling refutation, Minty-point checks and
//! small ground-truth fixtures.

pub mod classify;
pub mod fixtures;
pub mod minty;

pub use classify::{
    classify, evaluate_pair, ClassResult, ClassifyOptions, MonotonicityClass, MonotonicityReport, PairValue, Premise,
    Verdict,
};
pub use fixtures::{appendix_fixtures, Fixture, KnownWitness};
pub use minty::{verify_minty, MintySide, MintyVerdict};

#[cfg(test)]
mod tests;
