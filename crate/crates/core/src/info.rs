//! Semantic information measures, in bits.
//!
//! * pointwise: `I(x_i; θ_j) = log2(T(θ_j|x_i) / T(θ_j))`
//! * per label: `I(X; θ_j) = Σ_i P(x_i|y_j) log2(T(θ_j|x_i) / T(θ_j))`
//! * semantic mutual information: `G = Σ_j Σ_i P(x_i, y_j) log2(T(θ_j|x_i) / T(θ_j))`
//!
//! A zero truth value is floored at [`TRUTH_FLOOR`] inside logarithms so that
//! a counterexample costs a large but finite amount of information.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::prob::{Distribution, JointDistribution};
use crate::semantic::{logical_probability, SemanticChannel, TruthFunction};

/// Lower bound applied to truth values inside `log2`.
pub const TRUTH_FLOOR: f64 = 1e-10;

#[inline]
pub(crate) fn log2_floored(t: f64) -> f64 {
    t.max(TRUTH_FLOOR).log2()
}

/// Semantic mutual information with its entropy decomposition.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SemanticInfoReport {
    /// `G = I(X; θ)`.
    pub mutual_info: f64,
    /// `H(θ) = −Σ_j P(y_j) log2 T(θ_j)`.
    pub fuzzy_entropy: f64,
    /// `H(θ|X) = −Σ_j Σ_i P(x_i, y_j) log2 T(θ_j | x_i)`.
    pub conditional_fuzzy_entropy: f64,
    /// `I(X; θ_j)` per label (0 for labels that never occur).
    pub per_label: Vec<f64>,
}

fn positive_lp(truth: &TruthFunction, prior: &Distribution) -> Result<f64> {
    let lp = logical_probability(truth, prior)?;
    if lp <= 0.0 {
        Err(Error::ZeroLogicalProbability)
    } else {
        Ok(lp)
    }
}

/// Information conveyed about `x_i` by a label with this truth function.
/// Negative when the label is false (or nearly so) at `x_i`.
pub fn info_point(truth: &TruthFunction, prior: &Distribution, x_index: usize) -> Result<f64> {
    let lp = positive_lp(truth, prior)?;
    let t = *truth.values().get(x_index).ok_or(Error::IndexOutOfRange {
        index: x_index,
        len: truth.values().len(),
    })?;
    Ok(log2_floored(t) - lp.log2())
}

/// Generalized KL information of a label against a sampling distribution
/// `P(X | y_j)`.
pub fn info_label(
    truth: &TruthFunction,
    prior: &Distribution,
    sample: &Distribution,
) -> Result<f64> {
    truth.support().check_same(sample.support())?;
    let lp = positive_lp(truth, prior)?;
    Ok(weighted_log_ratio(truth.values(), lp, sample.probs()))
}

fn weighted_log_ratio(t: &[f64], lp: f64, weights: &[f64]) -> f64 {
    let log_lp = lp.log2();
    weights
        .iter()
        .zip(t)
        .filter(|(w, _)| **w > 0.0)
        .map(|(w, &t)| w * (log2_floored(t) - log_lp))
        .sum()
}

/// Semantic mutual information of `channel` against the joint sample
/// distribution `P(X, Y)`.
pub fn mutual_info(
    channel: &SemanticChannel,
    joint: &JointDistribution,
) -> Result<SemanticInfoReport> {
    channel.support().check_same(joint.rows())?;
    let n = channel.n_labels();
    if joint.cols().len() != n {
        return Err(Error::SupportMismatch {
            left: n,
            right: joint.cols().len(),
        });
    }
    let prior = joint.row_marginal();
    let py = joint.col_marginal();
    let mut g = 0.0;
    let mut h_theta = 0.0;
    let mut h_cond = 0.0;
    let mut per_label = vec![0.0; n];
    for (j, truth) in channel.truths().iter().enumerate() {
        let pyj = py.probs()[j];
        let lp = logical_probability(truth, &prior)?;
        if pyj <= 0.0 {
            continue;
        }
        if lp <= 0.0 {
            return Err(Error::ZeroLogicalProbability);
        }
        let log_lp = lp.log2();
        let mut label_sum = 0.0;
        for (i, &t) in truth.values().iter().enumerate() {
            let pxy = joint.get(i, j);
            if pxy > 0.0 {
                let lt = log2_floored(t);
                label_sum += pxy * (lt - log_lp);
                h_cond -= pxy * lt;
            }
        }
        g += label_sum;
        h_theta -= pyj * log_lp;
        per_label[j] = label_sum / pyj;
    }
    Ok(SemanticInfoReport {
        mutual_info: g,
        fuzzy_entropy: h_theta,
        conditional_fuzzy_entropy: h_cond,
        per_label,
    })
}

/// Log normalized likelihood `log2 Π_i [P(x_i|θ_j)/P(x_i)]^{N_i}` of a
/// labelled sample with counts `N_i`, computed as `N_j · I(X; θ_j)`.
pub fn log_normalized_likelihood(
    truth: &TruthFunction,
    prior: &Distribution,
    counts: &[u64],
) -> Result<f64> {
    if counts.len() != truth.values().len() {
        return Err(Error::SupportMismatch {
            left: counts.len(),
            right: truth.values().len(),
        });
    }
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return Err(Error::EmptySample);
    }
    let lp = positive_lp(truth, prior)?;
    let n = total as f64;
    let freq: Vec<f64> = counts.iter().map(|&c| c as f64 / n).collect();
    Ok(n * weighted_log_ratio(truth.values(), lp, &freq))
}
