//! Tools for mass phenomena on finite alphabets whose empirical frequencies
//! need not converge to a single distribution.
//!
//! The central object is a *regularity*: a nonempty closed family of
//! probability vectors on a finite alphabet, represented either as a finite
//! point set or as the convex hull of its listed vertices. A regularity is
//! what remains observable about a stream once convergence is dropped: the
//! set of limit points of its empirical measures.
//!
//! The crate covers the full loop:
//!
//! * [`realize`] turns a regularity back into data: indexed families of
//!   tuples (sampling nets) or single symbol sequences whose empirical
//!   measures have exactly the prescribed limit set, plus seeded iid
//!   sequences as the classical special case.
//! * [`empirics`] goes the other way: empirical measures, trajectories of
//!   running averages, recurrence-based limit set estimation, and a
//!   statistical equivalence test that compares two streams by the limit
//!   sets they induce.
//! * [`decision`] ranks decisions under a loss matrix by worst case over a
//!   regularity, with the classical minimax and Bayes rules as the two
//!   degenerate ends.
//! * [`regularity`] holds set-level operations: images under test
//!   functions, Hausdorff distance, extreme point pruning, and the largest
//!   subalgebra of events on which all members agree.
//!
//! Everything is deterministic: randomized generators take explicit seeds
//! and identical inputs produce byte-identical outputs.

#![forbid(unsafe_code)]

pub mod alphabet;
pub mod decision;
pub mod empirics;
mod error;
pub mod io;
pub mod measure;
pub mod metric;
pub mod realize;
pub mod regularity;

pub use alphabet::Alphabet;
pub use decision::{
    bayes, minimax, regularity_criterion, verify_proposition3, CriterionKind, CriterionReport,
    LossMatrix, Proposition3Report,
};
pub use empirics::{
    average_trajectory, empirical_measure, estimate_limit_set, net_trajectory, prefix_trajectory,
    s_equivalent, s_equivalent_battery, separating_function, EquivalenceVerdict, LimitSetEstimate,
    SeparationReport, Trajectory,
};
pub use error::{Error, Result};
pub use measure::{Measure, RationalMeasure, TestFunction};
pub use realize::{
    iid_generate, net_realize, rationalize, sequence_realize, steering_block_length,
    tuple_from_rational, NetItem, NetMeta, RealizationSchedule, SamplingNet, SequenceMeta,
    SymbolSequence,
};
pub use regularity::{Regularity, StochasticityReport};

/// Slack tolerated on raw user inputs before rejection.
pub const INPUT_TOL: f64 = 1e-6;

/// Tolerance for comparisons between derived floating point quantities.
pub const ARITHMETIC_TOL: f64 = 1e-9;

/// Tolerance below which two floating point values count as identical.
pub const IDENTITY_TOL: f64 = 1e-12;
