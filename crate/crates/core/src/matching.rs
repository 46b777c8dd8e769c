//! Channel matching in both directions.
//!
//! *Learning* lets a semantic channel match a Shannon channel: a truth
//! function is read off a channel column directly, or fitted inside a
//! parametric family by maximizing per-label semantic information.
//!
//! *Selection* lets a Shannon channel match a semantic channel: each instance
//! (or observation) gets the label carrying the most semantic information.
//!
//! Alternating the two over an interval partition of an observation grid is
//! the CM iteration ([`cm_iterate`]); it stops when the partition repeats.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::info::{info_label, log2_floored, mutual_info};
use crate::prob::{
    discretized_gaussian, renormalized, shannon_mutual_information, Distribution,
    JointDistribution, ShannonChannel, Support,
};
use crate::semantic::{logical_probability, ParametricTruth, SemanticChannel, TruthFunction};

/// Grid-search refinement levels for parametric fitting.
pub const SEARCH_LEVELS: usize = 3;
/// Grid points per axis per refinement level.
pub const SEARCH_POINTS: usize = 64;

/// Tolerance on objective decreases before a diagnostic is raised.
pub const MONOTONICITY_TOL: f64 = 1e-9;

/// Contiguous interval partition of an observation grid.
///
/// Region `r` holds the points `z` with `z'_{r-1} < z ≤ z'_r`, so a dividing
/// point is the largest grid value of the region below it. Each region maps to
/// a label.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Partition {
    #[serde(skip)]
    support: Support,
    dividing_points: Vec<f64>,
    region_labels: Vec<usize>,
}

impl Partition {
    /// Regions labelled `0, 1, …` from low to high.
    pub fn new(support: Support, dividing_points: Vec<f64>) -> Result<Self> {
        let labels = (0..=dividing_points.len()).collect();
        Self::with_labels(support, dividing_points, labels)
    }

    pub fn with_labels(
        support: Support,
        dividing_points: Vec<f64>,
        region_labels: Vec<usize>,
    ) -> Result<Self> {
        if region_labels.len() != dividing_points.len() + 1 {
            return Err(Error::InvalidPartition(format!(
                "{} region labels for {} dividing points",
                region_labels.len(),
                dividing_points.len()
            )));
        }
        if dividing_points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidPartition(
                "dividing points must be strictly increasing".into(),
            ));
        }
        let p = Self {
            support,
            dividing_points,
            region_labels,
        };
        let mut sizes = vec![0usize; p.n_regions()];
        for z in p.support.points() {
            sizes[p.region_of(*z)] += 1;
        }
        if let Some(r) = sizes.iter().position(|&s| s == 0) {
            return Err(Error::InvalidPartition(format!(
                "region {r} holds no grid point"
            )));
        }
        Ok(p)
    }

    /// Builds the partition from a per-point label map. Fails with
    /// [`Error::NonContiguousAssignment`] (carrying the map) when some label
    /// occupies more than one run.
    pub fn from_labels(support: Support, labels: &[usize]) -> Result<Self> {
        if labels.len() != support.len() {
            return Err(Error::SupportMismatch {
                left: labels.len(),
                right: support.len(),
            });
        }
        let mut dividing = Vec::new();
        let mut region_labels = vec![labels[0]];
        for k in 1..labels.len() {
            if labels[k] != labels[k - 1] {
                if region_labels.contains(&labels[k]) {
                    return Err(Error::NonContiguousAssignment {
                        labels: labels.to_vec(),
                    });
                }
                dividing.push(support.points()[k - 1]);
                region_labels.push(labels[k]);
            }
        }
        Self::with_labels(support, dividing, region_labels)
    }

    pub fn support(&self) -> &Support {
        &self.support
    }

    pub fn dividing_points(&self) -> &[f64] {
        &self.dividing_points
    }

    pub fn region_labels(&self) -> &[usize] {
        &self.region_labels
    }

    pub fn n_regions(&self) -> usize {
        self.dividing_points.len() + 1
    }

    /// Number of labels addressed (largest region label + 1).
    pub fn n_labels(&self) -> usize {
        self.region_labels.iter().max().map_or(0, |m| m + 1)
    }

    fn region_of(&self, z: f64) -> usize {
        self.dividing_points.iter().take_while(|&&d| z > d).count()
    }

    /// Label of every grid point.
    pub fn labels(&self) -> Vec<usize> {
        self.support
            .points()
            .iter()
            .map(|&z| self.region_labels[self.region_of(z)])
            .collect()
    }
}

/// Per-label conditional sampling distributions.
#[derive(Debug, Clone)]
pub struct LabeledSample {
    conditionals: Vec<Distribution>,
    negatives: Vec<Option<Distribution>>,
    marginals: Distribution,
}

impl LabeledSample {
    /// `conditionals[j] = P(X | y_j)`, label marginals `P(Y)`.
    pub fn new(conditionals: Vec<Distribution>, marginals: Distribution) -> Result<Self> {
        if conditionals.is_empty() {
            return Err(Error::EmptySample);
        }
        if marginals.len() != conditionals.len() {
            return Err(Error::SupportMismatch {
                left: marginals.len(),
                right: conditionals.len(),
            });
        }
        let s = conditionals[0].support().clone();
        for c in &conditionals[1..] {
            s.check_same(c.support())?;
        }
        let negatives = vec![None; conditionals.len()];
        Ok(Self {
            conditionals,
            negatives,
            marginals,
        })
    }

    /// From raw counts `counts[j][i] = N_ij`. Every label needs at least one
    /// example.
    pub fn from_counts(support: Support, counts: &[Vec<u64>]) -> Result<Self> {
        let totals: Vec<u64> = counts.iter().map(|c| c.iter().sum()).collect();
        if totals.contains(&0) {
            return Err(Error::EmptySample);
        }
        let conditionals = counts
            .iter()
            .map(|c| {
                Distribution::from_weights(support.clone(), c.iter().map(|&v| v as f64).collect())
            })
            .collect::<Result<Vec<_>>>()?;
        let marginals = Distribution::from_weights(
            Support::indices(counts.len())?,
            totals.iter().map(|&t| t as f64).collect(),
        )?;
        Self::new(conditionals, marginals)
    }

    /// Attaches the sampling distribution `P(X | y_j^c)` of negative examples.
    pub fn with_negative(mut self, label: usize, negative: Distribution) -> Result<Self> {
        if label >= self.conditionals.len() {
            return Err(Error::IndexOutOfRange {
                index: label,
                len: self.conditionals.len(),
            });
        }
        self.conditionals[0]
            .support()
            .check_same(negative.support())?;
        self.negatives[label] = Some(negative);
        Ok(self)
    }

    pub fn conditional(&self, j: usize) -> Result<&Distribution> {
        self.conditionals.get(j).ok_or(Error::IndexOutOfRange {
            index: j,
            len: self.conditionals.len(),
        })
    }

    pub fn negative(&self, j: usize) -> Option<&Distribution> {
        self.negatives.get(j).and_then(|n| n.as_ref())
    }

    pub fn marginals(&self) -> &Distribution {
        &self.marginals
    }
}

/// Search space for parametric truth fitting.
#[derive(Debug, Clone, PartialEq)]
pub enum TruthFamily {
    /// Gaussian truth with center and stddev in the given closed boxes.
    Gaussian {
        center: (f64, f64),
        stddev: (f64, f64),
    },
    /// Logistic truth with rate and midpoint in the given closed boxes.
    Logistic {
        rate: (f64, f64),
        midpoint: (f64, f64),
        increasing: bool,
    },
    /// A finite list of candidates.
    Candidates(Vec<ParametricTruth>),
}

/// Learned truth function `T*(θ_j|X) = P(y_j|X) / max P(y_j|X)`.
pub fn match_truth_direct(channel: &ShannonChannel, label: usize) -> Result<TruthFunction> {
    channel.check_output(label)?;
    let col = channel.column(label);
    let max = col.iter().cloned().fold(0.0, f64::max);
    if max <= 0.0 {
        return Err(Error::DeadLabel { label });
    }
    TruthFunction::new(
        channel.input().clone(),
        col.iter().map(|v| (v / max).min(1.0)).collect(),
    )
}

/// Direct match of every output label.
pub fn match_channel_direct(channel: &ShannonChannel) -> Result<SemanticChannel> {
    let truths = (0..channel.n_outputs())
        .map(|j| match_truth_direct(channel, j))
        .collect::<Result<Vec<_>>>()?;
    SemanticChannel::unnamed(truths)
}

fn objective(
    candidate: &ParametricTruth,
    support: &Support,
    prior: &Distribution,
    positive: &Distribution,
    negative: Option<&Distribution>,
) -> Option<f64> {
    let t = candidate.evaluate(support).ok()?;
    let mut v = info_label(&t, prior, positive).ok()?;
    if let Some(neg) = negative {
        v += info_label(&t.complement(), prior, neg).ok()?;
    }
    v.is_finite().then_some(v)
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 || hi <= lo {
        return vec![0.5 * (lo + hi)];
    }
    (0..n)
        .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
        .collect()
}

/// Coarse-to-fine search over a two-parameter box. Returns the best
/// (parameters, objective) or `None` when no point is admissible.
fn grid_search_2d<F>(
    a: (f64, f64),
    b: (f64, f64),
    exec: Execution,
    eval: F,
) -> Option<((f64, f64), f64)>
where
    F: Fn(f64, f64) -> Option<f64> + Sync + Send,
{
    let (mut a_box, mut b_box) = (a, b);
    let mut best: Option<((f64, f64), f64)> = None;
    for _ in 0..SEARCH_LEVELS {
        let xs = linspace(a_box.0, a_box.1, SEARCH_POINTS);
        let ys = linspace(b_box.0, b_box.1, SEARCH_POINTS);
        let values = exec.map_range(xs.len() * ys.len(), |k| {
            eval(xs[k / ys.len()], ys[k % ys.len()])
        });
        let mut level_best: Option<(usize, f64)> = None;
        for (k, v) in values.iter().enumerate() {
            if let Some(v) = v {
                if level_best.is_none_or(|(_, b)| *v > b) {
                    level_best = Some((k, *v));
                }
            }
        }
        let (k, v) = level_best?;
        let (x, y) = (xs[k / ys.len()], ys[k % ys.len()]);
        if best.is_none_or(|(_, b)| v >= b) {
            best = Some(((x, y), v));
        }
        let dx = if xs.len() > 1 {
            2.0 * (xs[1] - xs[0])
        } else {
            0.0
        };
        let dy = if ys.len() > 1 {
            2.0 * (ys[1] - ys[0])
        } else {
            0.0
        };
        a_box = ((x - dx).max(a.0), (x + dx).min(a.1));
        b_box = ((y - dy).max(b.0), (y + dy).min(b.1));
    }
    best
}

fn fit_family(
    support: &Support,
    prior: &Distribution,
    positive: &Distribution,
    negative: Option<&Distribution>,
    family: &TruthFamily,
    exec: Execution,
) -> Result<ParametricTruth> {
    let eval = |pt: &ParametricTruth| objective(pt, support, prior, positive, negative);
    match family {
        TruthFamily::Candidates(list) => {
            let mut best: Option<(usize, f64)> = None;
            for (k, c) in list.iter().enumerate() {
                if let Some(v) = eval(c) {
                    if best.is_none_or(|(_, b)| v > b) {
                        best = Some((k, v));
                    }
                }
            }
            best.map(|(k, _)| list[k].clone()).ok_or(Error::EmptyFamily)
        }
        TruthFamily::Gaussian { center, stddev } => {
            if !(stddev.1 > 0.0) || center.0 > center.1 || stddev.0 > stddev.1 {
                return Err(Error::EmptyFamily);
            }
            let lo_sd = stddev.0.max(f64::MIN_POSITIVE);
            grid_search_2d(*center, (lo_sd, stddev.1), exec, |c, d| {
                eval(&ParametricTruth::Gaussian {
                    center: c,
                    stddev: d,
                })
            })
            .map(|((c, d), _)| ParametricTruth::Gaussian {
                center: c,
                stddev: d,
            })
            .ok_or(Error::EmptyFamily)
        }
        TruthFamily::Logistic {
            rate,
            midpoint,
            increasing,
        } => {
            if rate.0 > rate.1 || midpoint.0 > midpoint.1 {
                return Err(Error::EmptyFamily);
            }
            let inc = *increasing;
            grid_search_2d(*rate, *midpoint, exec, |k, m| {
                eval(&ParametricTruth::Logistic {
                    rate: k,
                    midpoint: m,
                    increasing: inc,
                })
            })
            .map(|((k, m), _)| ParametricTruth::Logistic {
                rate: k,
                midpoint: m,
                increasing: inc,
            })
            .ok_or(Error::EmptyFamily)
        }
    }
}

/// Fits the family member maximizing `I(X; θ_j)` against the label's
/// sampling distribution.
pub fn match_truth_parametric(
    sample: &LabeledSample,
    prior: &Distribution,
    label: usize,
    family: &TruthFamily,
) -> Result<ParametricTruth> {
    let pos = sample.conditional(label)?;
    pos.support().check_same(prior.support())?;
    fit_family(
        prior.support(),
        prior,
        pos,
        None,
        family,
        Execution::default(),
    )
}

/// Fits against positive and negative examples: maximizes
/// `I(X; θ_j) + I(X; θ_j^c)` with `T(θ_j^c|x) = 1 − T(θ_j|x)`. Without
/// negative examples this is [`match_truth_parametric`].
pub fn match_truth_with_negatives(
    sample: &LabeledSample,
    prior: &Distribution,
    label: usize,
    family: &TruthFamily,
) -> Result<ParametricTruth> {
    match_truth_with_negatives_using(sample, prior, label, family, Execution::default())
}

pub fn match_truth_with_negatives_using(
    sample: &LabeledSample,
    prior: &Distribution,
    label: usize,
    family: &TruthFamily,
    exec: Execution,
) -> Result<ParametricTruth> {
    let pos = sample.conditional(label)?;
    pos.support().check_same(prior.support())?;
    fit_family(
        prior.support(),
        prior,
        pos,
        sample.negative(label),
        family,
        exec,
    )
}

fn info_scores(truths: &SemanticChannel, lps: &[f64], weights: &[f64]) -> Vec<f64> {
    truths
        .truths()
        .iter()
        .zip(lps)
        .map(|(t, &lp)| {
            let log_lp = lp.log2();
            weights
                .iter()
                .zip(t.values())
                .filter(|(w, _)| **w > 0.0)
                .map(|(w, &tv)| w * (log2_floored(tv) - log_lp))
                .sum()
        })
        .collect()
}

fn positive_lps(channel: &SemanticChannel, prior: &Distribution) -> Result<Vec<f64>> {
    let lps = channel.logical_probabilities(prior)?;
    if lps.iter().any(|&v| v <= 0.0) {
        return Err(Error::ZeroLogicalProbability);
    }
    Ok(lps)
}

/// Strict-greater argmax, so ties resolve to the lowest label.
fn first_argmax(v: &[f64]) -> usize {
    crate::prob::argmax(v)
}

/// Label for a seen instance `x`: `argmax_j log2(T(θ_j|x) / T(θ_j))`.
pub fn classify_semantic(
    channel: &SemanticChannel,
    prior: &Distribution,
    x_index: usize,
) -> Result<usize> {
    channel.support().check_same(prior.support())?;
    if x_index >= prior.len() {
        return Err(Error::IndexOutOfRange {
            index: x_index,
            len: prior.len(),
        });
    }
    let lps = positive_lps(channel, prior)?;
    let scores: Vec<f64> = channel
        .truths()
        .iter()
        .zip(&lps)
        .map(|(t, lp)| log2_floored(t.values()[x_index]) - lp.log2())
        .collect();
    Ok(first_argmax(&scores))
}

/// Label for an observation whose predicted true-class distribution is
/// `cond = P(X_L | z)`: `argmax_j Σ_i P(X_i|z) log2(T(θ_j|X_i) / T(θ_j))`.
pub fn classify_observed(
    channel: &SemanticChannel,
    prior: &Distribution,
    cond: &Distribution,
) -> Result<usize> {
    channel.support().check_same(prior.support())?;
    channel.support().check_same(cond.support())?;
    let lps = positive_lps(channel, prior)?;
    Ok(first_argmax(&info_scores(channel, &lps, cond.probs())))
}

/// Shannon channel `P(y_j | X_i) = Σ_{z ∈ C_j} P(z | X_i)` induced by a
/// partition of the observation grid.
pub fn shannon_channel_from_partition(
    cond: &ShannonChannel,
    partition: &Partition,
) -> Result<ShannonChannel> {
    cond.output().check_same(partition.support())?;
    let labels = partition.labels();
    let n_labels = partition.n_labels();
    let rows = (0..cond.input().len())
        .map(|i| {
            let mut row = vec![0.0; n_labels];
            for (k, &p) in cond.row(i).iter().enumerate() {
                row[labels[k]] += p;
            }
            renormalized(row)
        })
        .collect();
    ShannonChannel::from_rows(cond.input().clone(), Support::indices(n_labels)?, rows)
}

/// Per-observation class posteriors `P(X_L | z_k)`, one per grid point.
fn class_posteriors(cond: &ShannonChannel, prior: &Distribution) -> Result<Vec<Vec<f64>>> {
    cond.input().check_same(prior.support())?;
    let nz = cond.n_outputs();
    (0..nz)
        .map(|k| {
            let w: Vec<f64> = prior
                .probs()
                .iter()
                .enumerate()
                .map(|(i, p)| p * cond.get(i, k))
                .collect();
            let pz: f64 = w.iter().sum();
            if pz <= 0.0 {
                return Err(Error::ZeroMarginal { label: k });
            }
            Ok(w.into_iter().map(|v| v / pz).collect())
        })
        .collect()
}

/// Hard reassignment of every observation to its most informative label.
pub fn reassign_partition(
    channel: &SemanticChannel,
    cond: &ShannonChannel,
    prior: &Distribution,
) -> Result<Partition> {
    reassign_partition_using(channel, cond, prior, Execution::default())
}

pub fn reassign_partition_using(
    channel: &SemanticChannel,
    cond: &ShannonChannel,
    prior: &Distribution,
    exec: Execution,
) -> Result<Partition> {
    channel.support().check_same(prior.support())?;
    let lps = positive_lps(channel, prior)?;
    let post = class_posteriors(cond, prior)?;
    let labels = exec.map_range(post.len(), |k| {
        first_argmax(&info_scores(channel, &lps, &post[k]))
    });
    Partition::from_labels(cond.output().clone(), &labels)
}

/// One row of the CM trace.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CmRecord {
    pub iteration: usize,
    pub dividing_points: Vec<f64>,
    pub region_labels: Vec<usize>,
    /// Truth functions learned from this partition, one row per label.
    pub truths: Vec<Vec<f64>>,
    /// Objective `I(X_L; θ | S)` of this partition under the truth functions
    /// that produced it (the start record uses its own).
    pub objective_bits: f64,
    /// Shannon `I(X_L; Y)` of this partition.
    pub shannon_bits: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CmDiagnostic {
    pub iteration: usize,
    pub message: String,
}

/// Full history of a CM run.
#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct CmTrace {
    pub records: Vec<CmRecord>,
    pub diagnostics: Vec<CmDiagnostic>,
    pub converged: bool,
}

impl CmTrace {
    /// Reassignment steps performed (the last one confirms the fixed point
    /// when converged).
    pub fn iterations(&self) -> usize {
        self.records.len().saturating_sub(1)
    }

    /// Reassignments that produced a new partition.
    pub fn partition_changes(&self) -> usize {
        self.records
            .windows(2)
            .filter(|w| {
                w[0].dividing_points != w[1].dividing_points
                    || w[0].region_labels != w[1].region_labels
            })
            .count()
    }

    /// Dividing points after each reassignment.
    pub fn dividing_point_sequence(&self) -> Vec<Vec<f64>> {
        self.records
            .iter()
            .skip(1)
            .map(|r| r.dividing_points.clone())
            .collect()
    }
}

/// Gaussian observation model: row `i` is the discretized Gaussian
/// `P(Z | X_i)` on `z_support`. Class `i` is indexed `0..n`.
pub fn gaussian_observation_channel(
    classes: &[(f64, f64)],
    z_support: &Support,
) -> Result<ShannonChannel> {
    let rows = classes
        .iter()
        .map(|&(c, d)| discretized_gaussian(z_support, c, d))
        .collect::<Result<Vec<_>>>()?;
    ShannonChannel::from_distributions(Support::indices(classes.len())?, &rows)
}

fn matched_state(
    cond: &ShannonChannel,
    prior: &Distribution,
    partition: &Partition,
) -> Result<(SemanticChannel, JointDistribution)> {
    let shannon = shannon_channel_from_partition(cond, partition)?;
    let sem = match_channel_direct(&shannon)?;
    let joint = JointDistribution::from_prior_and_channel(prior, &shannon)?;
    Ok((sem, joint))
}

/// CM iteration for an interval partition of the observation grid.
///
/// Each step derives the Shannon channel of the current partition, matches a
/// semantic channel to it, and reassigns every observation. Stops when the
/// partition repeats; errors with [`Error::NoConvergence`] (carrying the
/// trace) after `max_iters` reassignments.
pub fn cm_iterate(
    cond: &ShannonChannel,
    prior: &Distribution,
    start: &Partition,
    max_iters: usize,
) -> Result<(Partition, CmTrace)> {
    cm_iterate_using(cond, prior, start, max_iters, Execution::default())
}

pub fn cm_iterate_using(
    cond: &ShannonChannel,
    prior: &Distribution,
    start: &Partition,
    max_iters: usize,
    exec: Execution,
) -> Result<(Partition, CmTrace)> {
    if max_iters == 0 {
        return Err(Error::InvalidPartition(
            "max_iters must be at least 1".into(),
        ));
    }
    cond.output().check_same(start.support())?;
    let mut trace = CmTrace::default();
    let mut current = start.clone();
    let (mut sem, joint) = matched_state(cond, prior, &current)?;
    let r0 = shannon_mutual_information(&joint);
    trace.records.push(CmRecord {
        iteration: 0,
        dividing_points: current.dividing_points.clone(),
        region_labels: current.region_labels.clone(),
        truths: truth_rows(&sem),
        objective_bits: r0,
        shannon_bits: r0,
    });
    let mut last_r = r0;
    for it in 1..=max_iters {
        let next = reassign_partition_using(&sem, cond, prior, exec)?;
        // Objective of the new partition under the truth functions that chose it.
        let shannon_next = shannon_channel_from_partition(cond, &next)?;
        let joint_next = JointDistribution::from_prior_and_channel(prior, &shannon_next)?;
        let g = if sem.n_labels() == joint_next.cols().len() {
            mutual_info(&sem, &joint_next)?.mutual_info
        } else {
            f64::NAN
        };
        let (next_sem, _) = matched_state(cond, prior, &next)?;
        let r = shannon_mutual_information(&joint_next);
        if g < last_r - MONOTONICITY_TOL {
            trace.diagnostics.push(CmDiagnostic {
                iteration: it,
                message: format!("reassignment lowered the objective: {last_r} -> {g}"),
            });
        }
        if r < g - MONOTONICITY_TOL {
            trace.diagnostics.push(CmDiagnostic {
                iteration: it,
                message: format!("rematching lowered the objective: {g} -> {r}"),
            });
        }
        last_r = r;
        trace.records.push(CmRecord {
            iteration: it,
            dividing_points: next.dividing_points.clone(),
            region_labels: next.region_labels.clone(),
            truths: truth_rows(&next_sem),
            objective_bits: g,
            shannon_bits: r,
        });
        if next == current {
            trace.converged = true;
            return Ok((next, trace));
        }
        current = next;
        sem = next_sem;
    }
    Err(Error::NoConvergence {
        iterations: max_iters,
        trace: Box::new(trace),
    })
}

fn truth_rows(sem: &SemanticChannel) -> Vec<Vec<f64>> {
    sem.truths().iter().map(|t| t.values().to_vec()).collect()
}

/// Selects a single label against abstention: the label is used at `x` iff
/// its semantic information there is positive.
pub fn positive_information_region(
    truth: &TruthFunction,
    prior: &Distribution,
) -> Result<Vec<bool>> {
    let lp = logical_probability(truth, prior)?;
    if lp <= 0.0 {
        return Err(Error::ZeroLogicalProbability);
    }
    let log_lp = lp.log2();
    Ok(truth
        .values()
        .iter()
        .map(|&t| log2_floored(t) - log_lp > 0.0)
        .collect())
}

/// Dividing point `x'` of the single-label classifier "use the label iff
/// `x > x'`". `None` when the positive-information region is empty, the whole
/// support, or not an upper interval.
pub fn abstention_boundary(truth: &TruthFunction, prior: &Distribution) -> Result<Option<f64>> {
    let region = positive_information_region(truth, prior)?;
    let first = match region.iter().position(|&b| b) {
        Some(0) | None => return Ok(None),
        Some(k) => k,
    };
    if region[first..].iter().all(|&b| b) {
        Ok(Some(truth.support().points()[first - 1]))
    } else {
        Ok(None)
    }
}
