//! Truth functions, logical probability and the third form of Bayes' theorem.
//!
//! A truth function `T(θ_j | x)` is not a distribution: its values lie in
//! `[0, 1]` and a family of them need not sum to one at any point. Pairing it
//! with a prior `P(X)` gives the *logical probability*
//! `T(θ_j) = Σ_i P(x_i) T(θ_j | x_i)`, which normalizes the *semantic
//! likelihood* `P(X | θ_j) = T(θ_j | X) P(X) / T(θ_j)`.
//! The inverse direction recovers the truth function from a posterior and the
//! prior, fixing the scale by requiring `max T = 1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prob::{renormalized, Distribution, Support};

/// Truth values `T(θ_j | x_i)` over a support.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TruthFunction {
    support: Support,
    t: Vec<f64>,
}

impl TruthFunction {
    pub fn new(support: Support, t: Vec<f64>) -> Result<Self> {
        if t.len() != support.len() {
            return Err(Error::InvalidTruth(format!(
                "{} truth values for {} support points",
                t.len(),
                support.len()
            )));
        }
        if let Some((i, v)) = t
            .iter()
            .enumerate()
            .find(|(_, v)| !(0.0..=1.0).contains(*v))
        {
            return Err(Error::InvalidTruth(format!("t[{i}] = {v} outside [0,1]")));
        }
        Ok(Self { support, t })
    }

    /// Constant truth function (`1` is the tautology, `0` the contradiction).
    pub fn constant(support: Support, value: f64) -> Result<Self> {
        let n = support.len();
        Self::new(support, vec![value; n])
    }

    /// Characteristic function of a crisp subset.
    pub fn indicator(support: Support, members: &[bool]) -> Result<Self> {
        Self::new(
            support,
            members.iter().map(|&m| if m { 1.0 } else { 0.0 }).collect(),
        )
    }

    pub fn support(&self) -> &Support {
        &self.support
    }

    pub fn values(&self) -> &[f64] {
        &self.t
    }

    pub fn max(&self) -> f64 {
        self.t.iter().cloned().fold(0.0, f64::max)
    }

    /// True when the maximum truth value is 1 (within 1e-9).
    pub fn is_optimized(&self) -> bool {
        (self.max() - 1.0).abs() <= 1e-9
    }

    /// `k · T` for `k ∈ [0, 1]`.
    pub fn scaled(&self, k: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&k) {
            return Err(Error::InvalidTruth(format!("scale {k} outside [0,1]")));
        }
        Ok(Self {
            support: self.support.clone(),
            t: self.t.iter().map(|v| v * k).collect(),
        })
    }

    /// Negation `1 − T`.
    pub fn complement(&self) -> Self {
        Self {
            support: self.support.clone(),
            t: self.t.iter().map(|v| 1.0 - v).collect(),
        }
    }
}

/// One truth function per label over a shared support.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSemanticChannel", into = "RawSemanticChannel")]
pub struct SemanticChannel {
    labels: Vec<String>,
    truths: Vec<TruthFunction>,
}

/// File form: `{"labels": [...], "support": [...], "truths": [[...], ...]}`.
#[derive(Serialize, Deserialize)]
struct RawSemanticChannel {
    labels: Vec<String>,
    support: Vec<f64>,
    truths: Vec<Vec<f64>>,
}

impl TryFrom<RawSemanticChannel> for SemanticChannel {
    type Error = Error;

    fn try_from(raw: RawSemanticChannel) -> Result<Self> {
        let support = Support::new(raw.support)?;
        let truths = raw
            .truths
            .into_iter()
            .map(|t| TruthFunction::new(support.clone(), t))
            .collect::<Result<Vec<_>>>()?;
        SemanticChannel::new(raw.labels, truths)
    }
}

impl From<SemanticChannel> for RawSemanticChannel {
    fn from(ch: SemanticChannel) -> Self {
        RawSemanticChannel {
            support: ch.support().points().to_vec(),
            truths: ch.truths.into_iter().map(|t| t.t).collect(),
            labels: ch.labels,
        }
    }
}

impl SemanticChannel {
    pub fn new(labels: Vec<String>, truths: Vec<TruthFunction>) -> Result<Self> {
        if truths.is_empty() {
            return Err(Error::InvalidTruth(
                "semantic channel needs at least one label".into(),
            ));
        }
        if labels.len() != truths.len() {
            return Err(Error::InvalidTruth(format!(
                "{} labels for {} truth functions",
                labels.len(),
                truths.len()
            )));
        }
        let s = truths[0].support();
        for t in &truths[1..] {
            s.check_same(t.support())?;
        }
        Ok(Self { labels, truths })
    }

    /// Labels named `y0, y1, …`.
    pub fn unnamed(truths: Vec<TruthFunction>) -> Result<Self> {
        let labels = (0..truths.len()).map(|j| format!("y{j}")).collect();
        Self::new(labels, truths)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn truths(&self) -> &[TruthFunction] {
        &self.truths
    }

    pub fn truth(&self, j: usize) -> Result<&TruthFunction> {
        self.truths.get(j).ok_or(Error::IndexOutOfRange {
            index: j,
            len: self.truths.len(),
        })
    }

    pub fn n_labels(&self) -> usize {
        self.truths.len()
    }

    pub fn support(&self) -> &Support {
        self.truths[0].support()
    }

    /// `T(θ_j)` for every label under `prior`.
    pub fn logical_probabilities(&self, prior: &Distribution) -> Result<Vec<f64>> {
        self.truths
            .iter()
            .map(|t| logical_probability(t, prior))
            .collect()
    }
}

/// Parametric truth-function families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ParametricTruth {
    /// `exp(-(x - center)² / (2 stddev²))`, peak 1 at `center`.
    Gaussian { center: f64, stddev: f64 },
    /// `1 / (1 + exp(-rate (x - midpoint)))`, mirrored when `increasing` is false.
    Logistic {
        rate: f64,
        midpoint: f64,
        increasing: bool,
    },
    /// `b′ + b · T_crisp(x)` with `b′ = 1 − |b|`, clamped to `[0, 1]`.
    ///
    /// `belief` may be negative (a misleading label); the tabulated truth
    /// value is still kept inside `[0, 1]`.
    Belief { base: Vec<bool>, belief: f64 },
}

impl ParametricTruth {
    /// Belief-form truth function specified by its disbelief `b′ ∈ [0, 1]`
    /// (the truth value given to counterexamples).
    pub fn belief_with_disbelief(base: Vec<bool>, disbelief: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&disbelief) {
            return Err(Error::InvalidBelief(format!(
                "disbelief {disbelief} outside [0,1]"
            )));
        }
        Ok(ParametricTruth::Belief {
            base,
            belief: 1.0 - disbelief,
        })
    }

    fn validate(&self) -> Result<()> {
        match self {
            ParametricTruth::Gaussian { center, stddev } => {
                if !(*stddev > 0.0) || !stddev.is_finite() {
                    return Err(Error::DegenerateWidth(*stddev));
                }
                if !center.is_finite() {
                    return Err(Error::InvalidTruth(format!("center {center}")));
                }
            }
            ParametricTruth::Logistic { rate, midpoint, .. } => {
                if !rate.is_finite() || !midpoint.is_finite() {
                    return Err(Error::InvalidTruth(format!(
                        "logistic rate {rate}, midpoint {midpoint}"
                    )));
                }
            }
            ParametricTruth::Belief { belief, .. } => {
                if !(-1.0..=1.0).contains(belief) {
                    return Err(Error::InvalidBelief(format!(
                        "belief {belief} outside [-1,1]"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Truth value at a single point; `index` is only used by the belief form.
    fn value_at(&self, x: f64, index: usize) -> f64 {
        match self {
            ParametricTruth::Gaussian { center, stddev } => {
                (-(x - center) * (x - center) / (2.0 * stddev * stddev)).exp()
            }
            ParametricTruth::Logistic {
                rate,
                midpoint,
                increasing,
            } => {
                let s = if *increasing { 1.0 } else { -1.0 };
                1.0 / (1.0 + (-s * rate * (x - midpoint)).exp())
            }
            ParametricTruth::Belief { base, belief } => {
                let crisp = if base[index] { 1.0 } else { 0.0 };
                let disbelief = 1.0 - belief.abs();
                (disbelief + belief * crisp).clamp(0.0, 1.0)
            }
        }
    }

    /// Tabulates the family member on a grid.
    pub fn evaluate(&self, support: &Support) -> Result<TruthFunction> {
        self.validate()?;
        if let ParametricTruth::Belief { base, .. } = self {
            if base.len() != support.len() {
                return Err(Error::SupportMismatch {
                    left: base.len(),
                    right: support.len(),
                });
            }
        }
        let t = support
            .points()
            .iter()
            .enumerate()
            .map(|(i, &x)| self.value_at(x, i))
            .collect();
        TruthFunction::new(support.clone(), t)
    }
}

/// Free-function form of [`ParametricTruth::evaluate`].
pub fn evaluate_parametric(pt: &ParametricTruth, support: &Support) -> Result<TruthFunction> {
    pt.evaluate(support)
}

/// `T(θ_j) = Σ_i P(x_i) T(θ_j | x_i)`.
pub fn logical_probability(truth: &TruthFunction, prior: &Distribution) -> Result<f64> {
    truth.support().check_same(prior.support())?;
    Ok(prior
        .probs()
        .iter()
        .zip(truth.values())
        .map(|(p, t)| p * t)
        .sum())
}

/// Semantic likelihood `P(X | θ_j) = T(θ_j | X) P(X) / T(θ_j)`.
pub fn bayes3_forward(truth: &TruthFunction, prior: &Distribution) -> Result<Distribution> {
    let lp = logical_probability(truth, prior)?;
    if lp <= 0.0 {
        return Err(Error::ZeroLogicalProbability);
    }
    let p = prior
        .probs()
        .iter()
        .zip(truth.values())
        .map(|(p, t)| p * t / lp)
        .collect();
    Distribution::new(prior.support().clone(), renormalized(p))
}

/// Recovers the truth function `T = (P(X|A)/P(X)) / max(P(X|A)/P(X))` and its
/// logical probability `T(A) = 1 / max(P(X|A)/P(X))`.
///
/// Points where both prior and posterior vanish get truth value 0.
pub fn bayes3_inverse(
    posterior: &Distribution,
    prior: &Distribution,
) -> Result<(TruthFunction, f64)> {
    posterior.support().check_same(prior.support())?;
    let mut ratios = Vec::with_capacity(prior.len());
    for (i, (&post, &pr)) in posterior.probs().iter().zip(prior.probs()).enumerate() {
        if pr > 0.0 {
            ratios.push(post / pr);
        } else if post > 0.0 {
            return Err(Error::UndefinedRatio(format!(
                "posterior {post} at index {i} where the prior is 0"
            )));
        } else {
            ratios.push(0.0);
        }
    }
    let max = ratios.iter().cloned().fold(0.0, f64::max);
    // Posterior sums to one, so some ratio is positive.
    debug_assert!(max > 0.0);
    let t = ratios.iter().map(|r| (r / max).min(1.0)).collect();
    Ok((TruthFunction::new(prior.support().clone(), t)?, 1.0 / max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn two() -> Support {
        Support::indices(2).unwrap()
    }

    #[test]
    fn truth_validation() {
        assert!(TruthFunction::new(two(), vec![0.5, 1.5]).is_err());
        assert!(TruthFunction::new(two(), vec![-0.1, 1.0]).is_err());
        assert!(TruthFunction::new(two(), vec![1.0]).is_err());
        let t = TruthFunction::new(two(), vec![0.3, 1.0]).unwrap();
        assert!(t.is_optimized());
        assert!(!t.scaled(0.5).unwrap().is_optimized());
    }

    #[test]
    fn logical_probability_cases() {
        let prior = Distribution::new(two(), vec![0.5, 0.5]).unwrap();
        let taut = TruthFunction::constant(two(), 1.0).unwrap();
        let contra = TruthFunction::constant(two(), 0.0).unwrap();
        assert_eq!(logical_probability(&taut, &prior).unwrap(), 1.0);
        assert_eq!(logical_probability(&contra, &prior).unwrap(), 0.0);
        let t = TruthFunction::new(two(), vec![1.0, 0.25]).unwrap();
        assert_abs_diff_eq!(logical_probability(&t, &prior).unwrap(), 0.625);
    }

    #[test]
    fn crisp_logical_probability_is_set_probability() {
        let s = Support::indices(4).unwrap();
        let prior = Distribution::new(s.clone(), vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        let a = TruthFunction::indicator(s.clone(), &[true, true, false, false]).unwrap();
        let b = TruthFunction::indicator(s, &[false, true, true, false]).unwrap();
        assert_abs_diff_eq!(
            logical_probability(&a, &prior).unwrap(),
            0.3,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            logical_probability(&b, &prior).unwrap(),
            0.5,
            epsilon = 1e-15
        );
    }

    #[test]
    fn forward_tautology_returns_prior() {
        let s = Support::indices(3).unwrap();
        let prior = Distribution::new(s.clone(), vec![0.2, 0.3, 0.5]).unwrap();
        let taut = TruthFunction::constant(s, 1.0).unwrap();
        assert_eq!(bayes3_forward(&taut, &prior).unwrap(), prior);
    }

    #[test]
    fn forward_crisp_conditioning() {
        let s = Support::indices(4).unwrap();
        let prior = Distribution::new(s.clone(), vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        let a = TruthFunction::indicator(s, &[false, true, true, false]).unwrap();
        let post = bayes3_forward(&a, &prior).unwrap();
        let expected = [0.0, 0.4, 0.6, 0.0];
        for (a, b) in post.probs().iter().zip(expected) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-15);
        }
    }

    #[test]
    fn forward_zero_logical_probability() {
        let prior = Distribution::point_mass(two(), 0).unwrap();
        let t = TruthFunction::new(two(), vec![0.0, 1.0]).unwrap();
        assert!(matches!(
            bayes3_forward(&t, &prior),
            Err(Error::ZeroLogicalProbability)
        ));
    }

    #[test]
    fn gps_estimate_lands_on_the_road() {
        // Grid of positions; the receiver reports "about 50". The prior puts
        // the car on roads at 40 and 58 only.
        let s = Support::integer_range(0, 100).unwrap();
        let road: Vec<f64> = s
            .points()
            .iter()
            .map(|&x| (-(x - 40.0f64).powi(2) / 2.0).exp() + (-(x - 58.0f64).powi(2) / 2.0).exp())
            .collect();
        let prior = Distribution::from_weights(s.clone(), road.clone()).unwrap();
        let circle = ParametricTruth::Gaussian {
            center: 50.0,
            stddev: 6.0,
        }
        .evaluate(&s)
        .unwrap();
        let post = bayes3_forward(&circle, &prior).unwrap();
        // direct evaluation of P(x) T(x) / Σ P T
        let w: Vec<f64> = s
            .points()
            .iter()
            .zip(&road)
            .map(|(x, r)| r * (-(x - 50.0f64).powi(2) / 72.0).exp())
            .collect();
        let best = w
            .iter()
            .enumerate()
            .fold(0, |b, (i, v)| if *v > w[b] { i } else { b });
        assert_eq!(post.argmax(), best);
        assert_eq!(s.points()[post.argmax()], 58.0);
        assert!(post.probs()[50] < 1e-6);
    }

    #[test]
    fn inverse_cases() {
        let prior = Distribution::new(two(), vec![0.5, 0.5]).unwrap();
        let (t, lp) = bayes3_inverse(&prior, &prior).unwrap();
        assert_eq!(t.values(), &[1.0, 1.0]);
        assert_eq!(lp, 1.0);

        let post = Distribution::new(two(), vec![0.8, 0.2]).unwrap();
        let (t, lp) = bayes3_inverse(&post, &prior).unwrap();
        assert_abs_diff_eq!(t.values()[0], 1.0);
        assert_abs_diff_eq!(t.values()[1], 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(lp, 0.625, epsilon = 1e-15);
    }

    #[test]
    fn inverse_recovers_crisp_set() {
        let s = Support::indices(4).unwrap();
        let prior = Distribution::new(s.clone(), vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        let post = Distribution::new(s, vec![0.0, 0.4, 0.6, 0.0]).unwrap();
        let (t, lp) = bayes3_inverse(&post, &prior).unwrap();
        for (a, b) in t.values().iter().zip([0.0, 1.0, 1.0, 0.0]) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(lp, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn inverse_undefined_ratio() {
        let prior = Distribution::point_mass(two(), 0).unwrap();
        let post = Distribution::uniform(two());
        assert!(matches!(
            bayes3_inverse(&post, &prior),
            Err(Error::UndefinedRatio(_))
        ));
    }

    #[test]
    fn inverse_zero_prior_zero_posterior_is_false() {
        let s = Support::indices(3).unwrap();
        let prior = Distribution::new(s.clone(), vec![0.5, 0.5, 0.0]).unwrap();
        let post = Distribution::new(s, vec![0.7, 0.3, 0.0]).unwrap();
        let (t, _) = bayes3_inverse(&post, &prior).unwrap();
        assert_eq!(t.values()[2], 0.0);
    }

    #[test]
    fn parametric_cases() {
        let s = Support::integer_range(0, 100).unwrap();
        let g = ParametricTruth::Gaussian {
            center: 70.0,
            stddev: 10.0,
        }
        .evaluate(&s)
        .unwrap();
        assert_eq!(g.values()[70], 1.0);
        assert!(g.is_optimized());
        let l = ParametricTruth::Logistic {
            rate: 0.2,
            midpoint: 75.0,
            increasing: true,
        }
        .evaluate(&s)
        .unwrap();
        assert_abs_diff_eq!(l.values()[75], 0.5);
        assert!(l.values().iter().all(|&v| v > 0.0 && v < 1.0));
        let b = ParametricTruth::belief_with_disbelief(vec![false, true], 0.2)
            .unwrap()
            .evaluate(&two())
            .unwrap();
        assert_abs_diff_eq!(b.values()[0], 0.2, epsilon = 1e-15);
        assert_abs_diff_eq!(b.values()[1], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn parametric_errors() {
        let s = two();
        assert!(matches!(
            ParametricTruth::Gaussian {
                center: 0.0,
                stddev: 0.0
            }
            .evaluate(&s),
            Err(Error::DegenerateWidth(_))
        ));
        assert!(matches!(
            ParametricTruth::belief_with_disbelief(vec![true, false], 1.5),
            Err(Error::InvalidBelief(_))
        ));
        assert!(matches!(
            ParametricTruth::Belief {
                base: vec![true, false],
                belief: -1.5
            }
            .evaluate(&s),
            Err(Error::InvalidBelief(_))
        ));
        assert!(ParametricTruth::Belief {
            base: vec![true],
            belief: 0.5
        }
        .evaluate(&s)
        .is_err());
    }

    #[test]
    fn negative_belief_stays_in_unit_interval() {
        let t = ParametricTruth::Belief {
            base: vec![false, true],
            belief: -0.5,
        }
        .evaluate(&two())
        .unwrap();
        assert_abs_diff_eq!(t.values()[0], 0.5);
        assert_abs_diff_eq!(t.values()[1], 0.0);
    }

    #[test]
    fn semantic_channel_json_round_trip() {
        let s = Support::new(vec![1.0, 2.0, 3.0]).unwrap();
        let ch = SemanticChannel::new(
            vec!["low".into(), "high".into()],
            vec![
                TruthFunction::new(s.clone(), vec![1.0, 0.5, 0.0]).unwrap(),
                TruthFunction::new(s, vec![0.0, 0.5, 1.0]).unwrap(),
            ],
        )
        .unwrap();
        let json = serde_json::to_string(&ch).unwrap();
        assert!(json.contains("\"support\":[1.0,2.0,3.0]"));
        let back: SemanticChannel = serde_json::from_str(&json).unwrap();
        assert_eq!(back, ch);

        let bad = r#"{"labels":["a"],"support":[1,2],"truths":[[0.5,1.2]]}"#;
        assert!(serde_json::from_str::<SemanticChannel>(bad).is_err());
    }

    #[test]
    fn channel_rejects_mismatched_supports() {
        let a = TruthFunction::constant(two(), 1.0).unwrap();
        let b = TruthFunction::constant(Support::indices(3).unwrap(), 1.0).unwrap();
        assert!(SemanticChannel::unnamed(vec![a, b]).is_err());
    }
}
