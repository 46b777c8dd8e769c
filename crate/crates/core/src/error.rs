use thiserror::Error;

use crate::matching::CmTrace;
use crate::mixture::CmEmTrace;
use crate::prob::Distribution;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid support: {0}")]
    InvalidSupport(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("invalid truth function: {0}")]
    InvalidTruth(String),

    #[error("supports do not match ({left} vs {right} points)")]
    SupportMismatch { left: usize, right: usize },

    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("label {label} has zero marginal probability")]
    ZeroMarginal { label: usize },

    #[error("KL divergence undefined: q[{index}] = 0 while p[{index}] = {p} > 0")]
    AbsoluteContinuityViolation { index: usize, p: f64 },

    #[error("degenerate width: stddev must be > 0, got {0}")]
    DegenerateWidth(f64),

    #[error("zero logical probability")]
    ZeroLogicalProbability,

    #[error("undefined ratio: {0}")]
    UndefinedRatio(String),

    #[error("invalid belief degree: {0}")]
    InvalidBelief(String),

    #[error("label {label} is dead: P(y|x) = 0 for every x")]
    DeadLabel { label: usize },

    #[error("parametric family has no admissible member")]
    EmptyFamily,

    #[error("empty sample")]
    EmptySample,

    #[error("argmax labeling is not interval-shaped")]
    NonContiguousAssignment { labels: Vec<usize> },

    #[error("partition iteration did not converge in {iterations} iterations")]
    NoConvergence {
        iterations: usize,
        trace: Box<CmTrace>,
    },

    #[error("mixture density Q(x) vanishes at index {index} where the data has mass")]
    ZeroMixtureDensity { index: usize },

    #[error("weight fixed point did not converge in {iterations} inner iterations")]
    InnerNoConvergence {
        iterations: usize,
        last: Box<Distribution>,
    },

    #[error("mixture iteration did not converge in {iterations} iterations")]
    MixtureNoConvergence {
        iterations: usize,
        trace: Box<CmEmTrace>,
    },

    #[error("component {component} degenerated: {reason}")]
    DegenerateComponent { component: usize, reason: String },

    #[error("Np + Nc must be positive")]
    EmptyCounts,

    #[error("invalid partition: {0}")]
    InvalidPartition(String),
}

impl Error {
    /// True for the iteration-budget failures.
    pub fn is_non_convergence(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. }
                | Error::MixtureNoConvergence { .. }
                | Error::InnerNoConvergence { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
