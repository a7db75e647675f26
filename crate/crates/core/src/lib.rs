//! Logical consistency of unsupervised evaluations of binary classifiers.
//!
//! Given only how an ensemble of binary classifiers agreed and disagreed on
//! a shared test (an [`EvaluationSketch`]), this crate computes which group
//! evaluations are logically possible, raises a misalignment alarm when none
//! of them satisfies a [`SafetySpec`], enumerates the exact set of ground
//! truths by brute force, and solves the three-classifier error-independent
//! model exactly.
//!
//! All arithmetic is exact: counts are integers and every ratio is a
//! [`Rational`].

pub mod alarm;
pub mod axioms;
pub mod error;
pub mod fixtures;
pub mod independent;
pub mod io;
pub mod model;
pub mod oracle;
pub mod rational;

pub use alarm::{run_alarm, AlarmMode, AlarmTrace, QaSlice, Verdict};
pub use axioms::{IntInterval, PSpaceStats, PairConstraint};
pub use error::{Error, Result};
pub use independent::{IndependentParams, IndependentSolution};
pub use model::{
    DecisionPattern, DecisionTable, EvaluationPoint, EvaluationSketch, FlipMode, Label,
    Marginals, SafetySpec, TruthSplit,
};
pub use rational::Rational;
