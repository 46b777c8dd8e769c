//! Finite discrete probability: supports, distributions, joint distributions,
//! Shannon channels and the standard information quantities in bits.
//!
//! Conventions: `0 · log 0 = 0`; every sum-to-one check uses
//! [`NORMALIZATION_TOL`](crate::NORMALIZATION_TOL).

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::NORMALIZATION_TOL;

/// Ordered grid of real-valued points (ages, observations, class indices).
#[derive(Debug, Clone, Serialize)]
#[serde(transparent)]
pub struct Support {
    points: Arc<[f64]>,
}

impl PartialEq for Support {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.points, &other.points) || self.points[..] == other.points[..]
    }
}

impl Support {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidSupport("support must be non-empty".into()));
        }
        if let Some(bad) = points.iter().find(|p| !p.is_finite()) {
            return Err(Error::InvalidSupport(format!("non-finite point {bad}")));
        }
        if let Some(w) = points.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSupport(format!(
                "points must be strictly increasing ({} then {})",
                w[0], w[1]
            )));
        }
        Ok(Self {
            points: points.into(),
        })
    }

    /// Integer grid `lo..=hi`.
    pub fn integer_range(lo: i64, hi: i64) -> Result<Self> {
        if hi < lo {
            return Err(Error::InvalidSupport(format!("empty range {lo}..={hi}")));
        }
        Self::new((lo..=hi).map(|v| v as f64).collect())
    }

    /// Index support `0, 1, …, n-1`, used for label and class sets.
    pub fn indices(n: usize) -> Result<Self> {
        Self::new((0..n).map(|v| v as f64).collect())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn first(&self) -> f64 {
        self.points[0]
    }

    pub fn last(&self) -> f64 {
        self.points[self.points.len() - 1]
    }

    /// Index of the grid point closest to `x` (lower index on ties).
    pub fn nearest_index(&self, x: f64) -> usize {
        let mut best = 0;
        for (i, &p) in self.points.iter().enumerate() {
            if (p - x).abs() < (self.points[best] - x).abs() {
                best = i;
            }
        }
        best
    }

    pub(crate) fn check_same(&self, other: &Support) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::SupportMismatch {
                left: self.len(),
                right: other.len(),
            })
        }
    }
}

/// Normalized probability vector over a [`Support`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Distribution {
    support: Support,
    p: Vec<f64>,
}

impl Distribution {
    /// Validates non-negativity and normalization (within 1e-9).
    pub fn new(support: Support, p: Vec<f64>) -> Result<Self> {
        if p.len() != support.len() {
            return Err(Error::InvalidDistribution(format!(
                "{} probabilities for {} support points",
                p.len(),
                support.len()
            )));
        }
        if let Some((i, v)) = p
            .iter()
            .enumerate()
            .find(|(_, v)| !(**v >= 0.0) || !v.is_finite())
        {
            return Err(Error::InvalidDistribution(format!("p[{i}] = {v}")));
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::InvalidDistribution(format!("sums to {sum}")));
        }
        Ok(Self { support, p })
    }

    /// Normalizes non-negative weights.
    pub fn from_weights(support: Support, w: Vec<f64>) -> Result<Self> {
        if let Some((i, v)) = w
            .iter()
            .enumerate()
            .find(|(_, v)| !(**v >= 0.0) || !v.is_finite())
        {
            return Err(Error::InvalidDistribution(format!("weight[{i}] = {v}")));
        }
        let sum: f64 = w.iter().sum();
        if sum <= 0.0 {
            return Err(Error::InvalidDistribution("weights sum to zero".into()));
        }
        let p = w.into_iter().map(|v| v / sum).collect();
        Self::new(support, p)
    }

    pub fn uniform(support: Support) -> Self {
        let n = support.len();
        Self {
            p: vec![1.0 / n as f64; n],
            support,
        }
    }

    pub fn point_mass(support: Support, index: usize) -> Result<Self> {
        if index >= support.len() {
            return Err(Error::IndexOutOfRange {
                index,
                len: support.len(),
            });
        }
        let mut p = vec![0.0; support.len()];
        p[index] = 1.0;
        Ok(Self { support, p })
    }

    pub fn support(&self) -> &Support {
        &self.support
    }

    pub fn probs(&self) -> &[f64] {
        &self.p
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.support
            .points()
            .iter()
            .zip(&self.p)
            .map(|(x, p)| x * p)
            .sum()
    }

    pub fn stddev(&self) -> f64 {
        let m = self.mean();
        self.support
            .points()
            .iter()
            .zip(&self.p)
            .map(|(x, p)| p * (x - m) * (x - m))
            .sum::<f64>()
            .sqrt()
    }

    /// Index of the largest probability (lowest index on ties).
    pub fn argmax(&self) -> usize {
        argmax(&self.p)
    }
}

/// Matrix of joint probabilities `P(x_i, y_j)`, rows over X, columns over Y.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    rows: Support,
    cols: Support,
    m: Vec<f64>,
}

impl JointDistribution {
    /// `m` is row-major, `rows.len() × cols.len()`.
    pub fn new(rows: Support, cols: Support, m: Vec<f64>) -> Result<Self> {
        if m.len() != rows.len() * cols.len() {
            return Err(Error::InvalidDistribution(format!(
                "joint has {} entries, expected {}",
                m.len(),
                rows.len() * cols.len()
            )));
        }
        if let Some(v) = m.iter().find(|v| !(**v >= 0.0) || !v.is_finite()) {
            return Err(Error::InvalidDistribution(format!("joint entry {v}")));
        }
        let sum: f64 = m.iter().sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::InvalidDistribution(format!("joint sums to {sum}")));
        }
        Ok(Self { rows, cols, m })
    }

    /// `P(x_i, y_j) = P(x_i) P(y_j | x_i)`.
    pub fn from_prior_and_channel(prior: &Distribution, channel: &ShannonChannel) -> Result<Self> {
        prior.support().check_same(channel.input())?;
        let n = channel.output().len();
        let mut m = Vec::with_capacity(prior.len() * n);
        for (i, &px) in prior.probs().iter().enumerate() {
            m.extend(channel.row(i).iter().map(|&t| px * t));
        }
        Self::new(prior.support().clone(), channel.output().clone(), m)
    }

    pub fn rows(&self) -> &Support {
        &self.rows
    }

    pub fn cols(&self) -> &Support {
        &self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.m[i * self.cols.len() + j]
    }

    pub fn row_marginal(&self) -> Distribution {
        let n = self.cols.len();
        let p = self.m.chunks(n).map(|r| r.iter().sum()).collect();
        Distribution {
            support: self.rows.clone(),
            p: renormalized(p),
        }
    }

    pub fn col_marginal(&self) -> Distribution {
        let n = self.cols.len();
        let mut p = vec![0.0; n];
        for row in self.m.chunks(n) {
            for (acc, v) in p.iter_mut().zip(row) {
                *acc += v;
            }
        }
        Distribution {
            support: self.cols.clone(),
            p: renormalized(p),
        }
    }

    pub fn entries(&self) -> &[f64] {
        &self.m
    }
}

/// Row-stochastic transition matrix `P(output | input)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShannonChannel {
    input: Support,
    output: Support,
    m: Vec<f64>,
}

impl ShannonChannel {
    /// One row per input point; each row must be a probability vector.
    pub fn from_rows(input: Support, output: Support, rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.len() != input.len() {
            return Err(Error::InvalidChannel(format!(
                "{} rows for {} input points",
                rows.len(),
                input.len()
            )));
        }
        let n = output.len();
        let mut m = Vec::with_capacity(rows.len() * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidChannel(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            if let Some(v) = row.iter().find(|v| !(0.0..=1.0).contains(*v)) {
                return Err(Error::InvalidChannel(format!(
                    "row {i} entry {v} outside [0,1]"
                )));
            }
            let s: f64 = row.iter().sum();
            if (s - 1.0).abs() > NORMALIZATION_TOL {
                return Err(Error::InvalidChannel(format!("row {i} sums to {s}")));
            }
            m.extend(row);
        }
        Ok(Self { input, output, m })
    }

    /// Channel whose row `i` is the distribution `rows[i]` over `output`.
    pub fn from_distributions(input: Support, rows: &[Distribution]) -> Result<Self> {
        let output = rows
            .first()
            .map(|d| d.support().clone())
            .ok_or_else(|| Error::InvalidChannel("no rows".into()))?;
        for r in rows {
            output.check_same(r.support())?;
        }
        Self::from_rows(
            input,
            output,
            rows.iter().map(|d| d.probs().to_vec()).collect(),
        )
    }

    pub fn input(&self) -> &Support {
        &self.input
    }

    pub fn output(&self) -> &Support {
        &self.output
    }

    pub fn n_outputs(&self) -> usize {
        self.output.len()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.output.len();
        &self.m[i * n..(i + 1) * n]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.m[i * self.output.len() + j]
    }

    /// Transition probability function `P(y_j | X)` over the input support.
    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.input.len()).map(|i| self.get(i, j)).collect()
    }

    /// `P(y_j) = Σ_i P(x_i) P(y_j | x_i)`.
    pub fn output_marginal(&self, prior: &Distribution, j: usize) -> Result<f64> {
        prior.support().check_same(&self.input)?;
        self.check_output(j)?;
        Ok(prior
            .probs()
            .iter()
            .enumerate()
            .map(|(i, p)| p * self.get(i, j))
            .sum())
    }

    pub(crate) fn check_output(&self, j: usize) -> Result<()> {
        if j >= self.output.len() {
            Err(Error::IndexOutOfRange {
                index: j,
                len: self.output.len(),
            })
        } else {
            Ok(())
        }
    }
}

/// Posterior `P(X | y_j)` by the classical Bayes formula, together with the
/// marginal `P(y_j)`.
pub fn bayes2_posterior(
    channel: &ShannonChannel,
    prior: &Distribution,
    label: usize,
) -> Result<(Distribution, f64)> {
    let marginal = channel.output_marginal(prior, label)?;
    if marginal <= 0.0 {
        return Err(Error::ZeroMarginal { label });
    }
    let p = prior
        .probs()
        .iter()
        .enumerate()
        .map(|(i, px)| px * channel.get(i, label) / marginal)
        .collect();
    Ok((
        Distribution {
            support: prior.support().clone(),
            p: renormalized(p),
        },
        marginal,
    ))
}

/// Shannon entropy in bits.
pub fn entropy(p: &Distribution) -> f64 {
    entropy_of(p.probs())
}

pub fn joint_entropy(joint: &JointDistribution) -> f64 {
    entropy_of(joint.entries())
}

/// `I(X;Y) = Σ P(x,y) log2(P(x,y) / (P(x)P(y)))`.
pub fn shannon_mutual_information(joint: &JointDistribution) -> f64 {
    let px = joint.row_marginal();
    let py = joint.col_marginal();
    let mut sum = 0.0;
    for (i, &a) in px.probs().iter().enumerate() {
        for (j, &b) in py.probs().iter().enumerate() {
            let pxy = joint.get(i, j);
            if pxy > 0.0 {
                sum += pxy * (pxy / (a * b)).log2();
            }
        }
    }
    sum.max(0.0)
}

/// Kullback–Leibler divergence `Σ p_i log2(p_i / q_i)`.
pub fn kl_divergence(p: &Distribution, q: &Distribution) -> Result<f64> {
    p.support().check_same(q.support())?;
    let mut sum = 0.0;
    for (i, (&a, &b)) in p.probs().iter().zip(q.probs()).enumerate() {
        if a > 0.0 {
            if b <= 0.0 {
                return Err(Error::AbsoluteContinuityViolation { index: i, p: a });
            }
            sum += a * (a / b).log2();
        }
    }
    Ok(sum.max(0.0))
}

/// Gaussian kernel `exp(-(z-c)²/(2d²))` truncated to the grid and normalized
/// over it.
pub fn discretized_gaussian(support: &Support, center: f64, stddev: f64) -> Result<Distribution> {
    let log_p = log_discretized_gaussian(support, center, stddev)?;
    let p = log_p.iter().map(|l| l.exp()).collect();
    Ok(Distribution {
        support: support.clone(),
        p: renormalized(p),
    })
}

/// Natural-log probabilities of [`discretized_gaussian`], finite even where
/// the linear value underflows.
pub fn log_discretized_gaussian(support: &Support, center: f64, stddev: f64) -> Result<Vec<f64>> {
    if !(stddev > 0.0) || !stddev.is_finite() {
        return Err(Error::DegenerateWidth(stddev));
    }
    let k: Vec<f64> = support
        .points()
        .iter()
        .map(|z| -(z - center) * (z - center) / (2.0 * stddev * stddev))
        .collect();
    let lse = log_sum_exp(&k);
    Ok(k.into_iter().map(|v| v - lse).collect())
}

pub(crate) fn log_sum_exp(v: &[f64]) -> f64 {
    let m = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + v.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

pub(crate) fn entropy_of(p: &[f64]) -> f64 {
    -p.iter()
        .filter(|&&v| v > 0.0)
        .map(|&v| v * v.log2())
        .sum::<f64>()
}

/// Lowest index attaining the maximum.
pub(crate) fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate() {
        if x > v[best] {
            best = i;
        }
    }
    best
}

/// Divides by the sum; input already sums to one up to rounding.
pub(crate) fn renormalized(mut p: Vec<f64>) -> Vec<f64> {
    let s: f64 = p.iter().sum();
    if s > 0.0 {
        p.iter_mut().for_each(|v| *v /= s);
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn two() -> Support {
        Support::indices(2).unwrap()
    }

    fn test_channel() -> ShannonChannel {
        ShannonChannel::from_rows(two(), two(), vec![vec![0.9, 0.1], vec![0.2, 0.8]]).unwrap()
    }

    #[test]
    fn support_validation() {
        assert!(Support::new(vec![]).is_err());
        assert!(Support::new(vec![1.0, 1.0]).is_err());
        assert!(Support::new(vec![2.0, 1.0]).is_err());
        assert!(Support::new(vec![f64::NAN]).is_err());
        assert_eq!(Support::integer_range(1, 100).unwrap().len(), 100);
        assert!(Support::integer_range(3, 2).is_err());
    }

    #[test]
    fn distribution_validation() {
        let s = two();
        assert!(Distribution::new(s.clone(), vec![0.5, 0.6]).is_err());
        assert!(Distribution::new(s.clone(), vec![-0.1, 1.1]).is_err());
        assert!(Distribution::new(s.clone(), vec![1.0]).is_err());
        assert!(Distribution::from_weights(s.clone(), vec![0.0, 0.0]).is_err());
        let d = Distribution::from_weights(s, vec![1.0, 3.0]).unwrap();
        assert_eq!(d.probs(), &[0.25, 0.75]);
    }

    #[test]
    fn channel_rows_must_be_stochastic() {
        assert!(
            ShannonChannel::from_rows(two(), two(), vec![vec![0.5, 0.4], vec![0.5, 0.5]]).is_err()
        );
        assert!(
            ShannonChannel::from_rows(two(), two(), vec![vec![1.2, -0.2], vec![0.5, 0.5]]).is_err()
        );
        assert!(ShannonChannel::from_rows(two(), two(), vec![vec![1.0, 0.0]]).is_err());
    }

    #[test]
    fn posterior_identity_channel_is_point_mass() {
        let s = Support::indices(3).unwrap();
        let rows = (0..3)
            .map(|i| (0..3).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        let ch = ShannonChannel::from_rows(s.clone(), s.clone(), rows).unwrap();
        let prior = Distribution::new(s, vec![0.2, 0.3, 0.5]).unwrap();
        for j in 0..3 {
            let (post, _) = bayes2_posterior(&ch, &prior, j).unwrap();
            assert_eq!(post.argmax(), j);
            assert_abs_diff_eq!(post.probs()[j], 1.0);
        }
    }

    #[test]
    fn posterior_uninformative_channel_returns_prior() {
        let s = Support::indices(3).unwrap();
        let rows = vec![vec![0.3, 0.7]; 3];
        let ch = ShannonChannel::from_rows(s.clone(), two(), rows).unwrap();
        let prior = Distribution::new(s, vec![0.2, 0.3, 0.5]).unwrap();
        let (post, _) = bayes2_posterior(&ch, &prior, 1).unwrap();
        for (a, b) in post.probs().iter().zip(prior.probs()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-15);
        }
    }

    #[test]
    fn posterior_hand_arithmetic() {
        let prior = Distribution::new(two(), vec![0.8, 0.2]).unwrap();
        let (post, py) = bayes2_posterior(&test_channel(), &prior, 1).unwrap();
        // 0.8*0.1 + 0.2*0.8
        assert_abs_diff_eq!(py, 0.24, epsilon = 1e-15);
        assert_abs_diff_eq!(post.probs()[0], 1.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(post.probs()[1], 2.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn posterior_zero_marginal() {
        let ch =
            ShannonChannel::from_rows(two(), two(), vec![vec![1.0, 0.0], vec![0.5, 0.5]]).unwrap();
        let prior = Distribution::point_mass(two(), 0).unwrap();
        assert!(matches!(
            bayes2_posterior(&ch, &prior, 1),
            Err(Error::ZeroMarginal { label: 1 })
        ));
        assert!(matches!(
            bayes2_posterior(&ch, &prior, 2),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn mutual_information_cases() {
        // independent
        let rows = Support::indices(2).unwrap();
        let cols = Support::indices(3).unwrap();
        let (px, py) = ([0.3, 0.7], [0.2, 0.5, 0.3]);
        let m = px
            .iter()
            .flat_map(|a| py.iter().map(move |b| a * b))
            .collect();
        let j = JointDistribution::new(rows, cols, m).unwrap();
        assert_abs_diff_eq!(shannon_mutual_information(&j), 0.0, epsilon = 1e-12);

        // diagonal uniform over 4 pairs
        let s4 = Support::indices(4).unwrap();
        let m = (0..16)
            .map(|k| if k % 5 == 0 { 0.25 } else { 0.0 })
            .collect();
        let j = JointDistribution::new(s4.clone(), s4, m).unwrap();
        assert_abs_diff_eq!(shannon_mutual_information(&j), 2.0, epsilon = 1e-12);

        // brute-force double sum
        let prior = Distribution::new(two(), vec![0.8, 0.2]).unwrap();
        let j = JointDistribution::from_prior_and_channel(&prior, &test_channel()).unwrap();
        let pxy: [[f64; 2]; 2] = [[0.72, 0.08], [0.04, 0.16]];
        let pyv = [0.76, 0.24];
        let pxv = [0.8, 0.2];
        let mut oracle = 0.0;
        for i in 0..2 {
            for k in 0..2 {
                oracle += pxy[i][k] * (pxy[i][k] / (pxv[i] * pyv[k])).log2();
            }
        }
        assert_abs_diff_eq!(shannon_mutual_information(&j), oracle, epsilon = 1e-12);
        let h = entropy(&j.row_marginal()) + entropy(&j.col_marginal()) - joint_entropy(&j);
        assert_abs_diff_eq!(shannon_mutual_information(&j), h, epsilon = 1e-12);
    }

    #[test]
    fn kl_cases() {
        let p = Distribution::new(two(), vec![0.75, 0.25]).unwrap();
        let q = Distribution::uniform(two());
        assert_abs_diff_eq!(kl_divergence(&q, &q).unwrap(), 0.0);
        let pm = Distribution::point_mass(two(), 0).unwrap();
        assert_abs_diff_eq!(kl_divergence(&pm, &q).unwrap(), 1.0, epsilon = 1e-15);
        let oracle = 0.75 * (1.5f64).log2() + 0.25 * (0.5f64).log2();
        assert_abs_diff_eq!(kl_divergence(&p, &q).unwrap(), oracle, epsilon = 1e-15);
        assert_abs_diff_eq!(kl_divergence(&p, &q).unwrap(), 0.1887, epsilon = 1e-4);
        assert!(matches!(
            kl_divergence(&q, &pm),
            Err(Error::AbsoluteContinuityViolation { index: 1, .. })
        ));
    }

    #[test]
    fn gaussian_cases() {
        let s = Support::integer_range(-10, 10).unwrap();
        let g = discretized_gaussian(&s, 0.0, 3.0).unwrap();
        for i in 0..s.len() {
            assert_abs_diff_eq!(g.probs()[i], g.probs()[s.len() - 1 - i], epsilon = 1e-15);
        }
        let narrow = discretized_gaussian(&s, 2.2, 0.01).unwrap();
        assert_abs_diff_eq!(narrow.probs()[12], 1.0, epsilon = 1e-12);

        let grid = Support::integer_range(1, 100).unwrap();
        let g = discretized_gaussian(&grid, 30.0, 15.0).unwrap();
        assert_eq!(grid.points()[g.argmax()], 30.0);
        let w: Vec<f64> = (1..=100)
            .map(|z| (-((z as f64 - 30.0).powi(2)) / 450.0).exp())
            .collect();
        let total: f64 = w.iter().sum();
        for (a, b) in g.probs().iter().zip(&w) {
            assert_abs_diff_eq!(*a, b / total, epsilon = 1e-15);
        }
        assert!(matches!(
            discretized_gaussian(&grid, 0.0, 0.0),
            Err(Error::DegenerateWidth(_))
        ));
        assert!(discretized_gaussian(&grid, 0.0, -1.0).is_err());
    }

    #[test]
    fn entropy_cases() {
        let s8 = Support::indices(8).unwrap();
        assert_abs_diff_eq!(
            entropy(&Distribution::uniform(s8.clone())),
            3.0,
            epsilon = 1e-12
        );
        assert_eq!(entropy(&Distribution::point_mass(s8, 3).unwrap()), 0.0);
    }

    #[test]
    fn joint_entropy_of_real_mixture() {
        let grid = Support::integer_range(1, 100).unwrap();
        let a = discretized_gaussian(&grid, 35.0, 8.0).unwrap();
        let b = discretized_gaussian(&grid, 65.0, 12.0).unwrap();
        let m = (0..100)
            .flat_map(|i| [0.1 * a.probs()[i], 0.9 * b.probs()[i]])
            .collect();
        let j = JointDistribution::new(grid, Support::indices(2).unwrap(), m).unwrap();
        assert_abs_diff_eq!(joint_entropy(&j), 6.031, epsilon = 0.05);
    }
}
