//! Semantic channels over finite supports.
//!
//! A *Shannon channel* is a row-stochastic matrix of transition probabilities
//! `P(y_j | x_i)`. A *semantic channel* is a family of truth functions
//! `T(θ_j | x)`, one per label, with values in `[0, 1]` and maximum 1 when
//! optimized. The third form of Bayes' theorem converts between the two using
//! the logical probability `T(θ_j) = Σ_i P(x_i) T(θ_j | x_i)` as the
//! normalizer.
//!
//! Module map:
//!
//! | module | contents |
//! |--------|----------|
//! | [`prob`] | supports, distributions, joints, Shannon channels, entropies, KL |
//! | [`semantic`] | truth functions, logical probability, Bayes III, parametric truth families |
//! | [`info`] | semantic information measures and the entropy decomposition |
//! | [`matching`] | learning truth functions, semantic classifiers, the CM partition iteration |
//! | [`mixture`] | the CM-EM loop for Gaussian mixtures on a grid |
//! | [`confirmation`] | medical-test channels, belief/disbelief degrees, likelihood ratios |
//!
//! All logarithms are base 2; every information quantity is reported in bits.
//!
//! Inner loops that are independent per grid point (partition reassignment,
//! parametric grid search, batch sweeps) run through [`exec::Execution`], which
//! uses rayon when the `parallel` feature is enabled and a plain iterator
//! otherwise.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod confirmation;
pub mod error;
pub mod exec;
pub mod info;
pub mod matching;
pub mod mixture;
pub mod prob;
pub mod semantic;

pub use error::{Error, Result};
pub use exec::Execution;
pub use prob::{Distribution, JointDistribution, ShannonChannel, Support};
pub use semantic::{ParametricTruth, SemanticChannel, TruthFunction};

/// Tolerance for "sums to one" checks on distributions and channel rows.
pub const NORMALIZATION_TOL: f64 = 1e-9;
