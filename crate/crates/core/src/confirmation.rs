//! Medical-test confirmation.
//!
//! A binary test with sensitivity `P(y_1|x_1)` and specificity `P(y_0|x_0)` is
//! a 2×2 Shannon channel, with `x_1` = infected and `y_1` = positive. The
//! matched truth function of a positive result gives truth 1 to `x_1` and the
//! *disbelief* `b′_1 = P(y_1|x_0)/P(y_1|x_1)` to counterexamples. The degree
//! of belief is `b* = 1 − b′` for a confirming test and goes negative for a
//! misleading one.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prob::{Distribution, ShannonChannel, Support};
use crate::semantic::{bayes3_forward, ParametricTruth};

/// Test outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestLabel {
    Negative,
    Positive,
}

impl TestLabel {
    pub fn index(self) -> usize {
        match self {
            TestLabel::Negative => 0,
            TestLabel::Positive => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestChannel {
    sensitivity: f64,
    specificity: f64,
}

impl TestChannel {
    pub fn new(sensitivity: f64, specificity: f64) -> Result<Self> {
        for (name, v) in [("sensitivity", sensitivity), ("specificity", specificity)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidChannel(format!("{name} {v} outside [0,1]")));
            }
        }
        Ok(Self {
            sensitivity,
            specificity,
        })
    }

    pub fn sensitivity(&self) -> f64 {
        self.sensitivity
    }

    pub fn specificity(&self) -> f64 {
        self.specificity
    }

    /// Rows `x_0: (spec, 1 − spec)`, `x_1: (1 − sens, sens)`.
    pub fn to_shannon_channel(&self) -> ShannonChannel {
        let two = Support::indices(2).expect("two points");
        ShannonChannel::from_rows(
            two.clone(),
            two,
            vec![
                vec![self.specificity, 1.0 - self.specificity],
                vec![1.0 - self.sensitivity, self.sensitivity],
            ],
        )
        .expect("rows are stochastic")
    }
}

/// A likelihood ratio that may be infinite (no counterexamples).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum LikelihoodRatio {
    Finite(f64),
    Infinite,
}

impl LikelihoodRatio {
    fn from_parts(num: f64, den: f64) -> Result<Self> {
        if den > 0.0 {
            Ok(LikelihoodRatio::Finite(num / den))
        } else if num > 0.0 {
            Ok(LikelihoodRatio::Infinite)
        } else {
            Err(Error::UndefinedRatio(format!("{num}/{den}")))
        }
    }

    pub fn value(&self) -> f64 {
        match self {
            LikelihoodRatio::Finite(v) => *v,
            LikelihoodRatio::Infinite => f64::INFINITY,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConfirmationResult {
    /// Degree of belief in `[−1, 1]`.
    pub b_star: f64,
    /// Degree of disbelief `1 − |b*|`.
    pub b_prime: f64,
    pub lr: LikelihoodRatio,
    /// Confidence level `1 / (1 + counterexample ratio)`.
    pub cl: f64,
    /// Negative belief: the test supports the opposite label.
    pub misleading: bool,
}

impl ConfirmationResult {
    /// From the counterexample ratio `r = (counterexamples)/(examples)`.
    fn from_ratio(num: f64, den: f64) -> Result<Self> {
        if num < 0.0 || den < 0.0 || num + den <= 0.0 {
            return Err(Error::UndefinedRatio(format!("{num}/{den}")));
        }
        let b_star = if num < den {
            1.0 - num / den
        } else {
            den / num - 1.0
        };
        Ok(Self {
            b_star,
            b_prime: 1.0 - b_star.abs(),
            lr: LikelihoodRatio::from_parts(den, num)?,
            cl: den / (den + num),
            misleading: b_star < 0.0,
        })
    }
}

/// Optimal disbelief degrees `(b′_1, b′_0)`:
/// `b′_1 = P(y_1|x_0)/P(y_1|x_1)`, `b′_0 = P(y_0|x_1)/P(y_0|x_0)`.
pub fn optimal_disbelief(tc: &TestChannel) -> Result<(f64, f64)> {
    if tc.sensitivity <= 0.0 {
        return Err(Error::UndefinedRatio("sensitivity is 0".into()));
    }
    if tc.specificity <= 0.0 {
        return Err(Error::UndefinedRatio("specificity is 0".into()));
    }
    Ok((
        (1.0 - tc.specificity) / tc.sensitivity,
        (1.0 - tc.sensitivity) / tc.specificity,
    ))
}

/// `(LR+, LR−) = (sens / (1 − spec), spec / (1 − sens))`.
pub fn likelihood_ratios(tc: &TestChannel) -> Result<(LikelihoodRatio, LikelihoodRatio)> {
    Ok((
        LikelihoodRatio::from_parts(tc.sensitivity, 1.0 - tc.specificity)?,
        LikelihoodRatio::from_parts(tc.specificity, 1.0 - tc.sensitivity)?,
    ))
}

/// Confirmation of a label from `np` examples and `nc` counterexamples.
pub fn confirmation_from_counts(np: u64, nc: u64) -> Result<ConfirmationResult> {
    if np + nc == 0 {
        return Err(Error::EmptyCounts);
    }
    ConfirmationResult::from_ratio(nc as f64, np as f64)
}

/// Confirmation of each test outcome, `(positive, negative)`.
pub fn confirmation_from_channel(
    tc: &TestChannel,
) -> Result<(ConfirmationResult, ConfirmationResult)> {
    Ok((
        ConfirmationResult::from_ratio(1.0 - tc.specificity, tc.sensitivity)?,
        ConfirmationResult::from_ratio(1.0 - tc.sensitivity, tc.specificity)?,
    ))
}

/// `P(X | θ)` for the received outcome, using the belief-form truth function
/// whose counterexample value is the disbelief of that outcome.
pub fn predict_with_belief(
    b_prime_pos: f64,
    b_prime_neg: f64,
    prior: &Distribution,
    received: TestLabel,
) -> Result<Distribution> {
    if prior.len() != 2 {
        return Err(Error::SupportMismatch {
            left: prior.len(),
            right: 2,
        });
    }
    let (base, disbelief) = match received {
        TestLabel::Positive => (vec![false, true], b_prime_pos),
        TestLabel::Negative => (vec![true, false], b_prime_neg),
    };
    let truth =
        ParametricTruth::belief_with_disbelief(base, disbelief)?.evaluate(prior.support())?;
    bayes3_forward(&truth, prior)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::match_truth_direct;
    use crate::prob::bayes2_posterior;
    use approx::assert_abs_diff_eq;

    fn prior(p1: f64) -> Distribution {
        Distribution::new(Support::indices(2).unwrap(), vec![1.0 - p1, p1]).unwrap()
    }

    #[test]
    fn disbelief_cases() {
        assert_eq!(
            optimal_disbelief(&TestChannel::new(1.0, 1.0).unwrap()).unwrap(),
            (0.0, 0.0)
        );
        let (a, b) = optimal_disbelief(&TestChannel::new(0.9, 0.9).unwrap()).unwrap();
        assert_abs_diff_eq!(a, 1.0 / 9.0, epsilon = 1e-15);
        assert_abs_diff_eq!(b, 1.0 / 9.0, epsilon = 1e-15);
        let (a, b) = optimal_disbelief(&TestChannel::new(0.3, 0.7).unwrap()).unwrap();
        assert_abs_diff_eq!(a, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(b, 1.0, epsilon = 1e-15);
        assert!(matches!(
            optimal_disbelief(&TestChannel::new(0.0, 0.5).unwrap()),
            Err(Error::UndefinedRatio(_))
        ));
    }

    #[test]
    fn disbelief_is_direct_match() {
        let tc = TestChannel::new(0.92, 0.83).unwrap();
        let ch = tc.to_shannon_channel();
        let (b1, b0) = optimal_disbelief(&tc).unwrap();
        assert_abs_diff_eq!(
            match_truth_direct(&ch, 1).unwrap().values()[0],
            b1,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            match_truth_direct(&ch, 0).unwrap().values()[1],
            b0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn likelihood_ratio_cases() {
        let (p, n) = likelihood_ratios(&TestChannel::new(0.9, 0.9).unwrap()).unwrap();
        assert_abs_diff_eq!(p.value(), 9.0, epsilon = 1e-12);
        assert_abs_diff_eq!(n.value(), 9.0, epsilon = 1e-12);
        let (p, n) = likelihood_ratios(&TestChannel::new(0.5, 0.5).unwrap()).unwrap();
        assert_eq!((p.value(), n.value()), (1.0, 1.0));
        let (p, _) = likelihood_ratios(&TestChannel::new(0.8, 1.0).unwrap()).unwrap();
        assert_eq!(p, LikelihoodRatio::Infinite);
    }

    #[test]
    fn counts_cases() {
        let r = confirmation_from_counts(10, 20).unwrap();
        assert_abs_diff_eq!(r.b_star, -0.5, epsilon = 1e-15);
        assert!(r.misleading);
        let r = confirmation_from_counts(7, 7).unwrap();
        assert_eq!((r.b_star, r.cl), (0.0, 0.5));
        let r = confirmation_from_counts(5, 0).unwrap();
        assert_eq!(
            (r.b_star, r.cl, r.lr),
            (1.0, 1.0, LikelihoodRatio::Infinite)
        );
        let r = confirmation_from_counts(0, 5).unwrap();
        assert_eq!(r.b_star, -1.0);
        assert!(matches!(
            confirmation_from_counts(0, 0),
            Err(Error::EmptyCounts)
        ));
        let r = confirmation_from_counts(30, 10).unwrap();
        assert_abs_diff_eq!(r.cl, 1.0 / (2.0 - r.b_star), epsilon = 1e-12);
        assert_abs_diff_eq!(r.b_prime, 1.0 - r.b_star.abs(), epsilon = 1e-12);
    }

    #[test]
    fn channel_confirmation_matches_disbelief() {
        let tc = TestChannel::new(0.9, 0.8).unwrap();
        let (pos, neg) = confirmation_from_channel(&tc).unwrap();
        let (b1, b0) = optimal_disbelief(&tc).unwrap();
        assert_abs_diff_eq!(pos.b_prime, b1, epsilon = 1e-12);
        assert_abs_diff_eq!(neg.b_prime, b0, epsilon = 1e-12);
        let (lp, _) = likelihood_ratios(&tc).unwrap();
        assert_abs_diff_eq!(pos.lr.value(), lp.value(), epsilon = 1e-12);
    }

    #[test]
    fn prediction_cases() {
        let p = prior(0.2);
        let d = predict_with_belief(0.0, 0.0, &p, TestLabel::Positive).unwrap();
        assert_eq!(d.probs(), &[0.0, 1.0]);
        let d = predict_with_belief(1.0, 1.0, &p, TestLabel::Positive).unwrap();
        assert_abs_diff_eq!(d.probs()[1], 0.2, epsilon = 1e-15);
        let d = predict_with_belief(1.0 / 9.0, 1.0 / 9.0, &p, TestLabel::Positive).unwrap();
        assert_abs_diff_eq!(d.probs()[1], 0.2 / (0.2 + 0.8 / 9.0), epsilon = 1e-12);
        assert_abs_diff_eq!(d.probs()[1], 0.6923, epsilon = 1e-4);
        let ch = TestChannel::new(0.9, 0.9).unwrap().to_shannon_channel();
        let (post, _) = bayes2_posterior(&ch, &p, 1).unwrap();
        assert_abs_diff_eq!(d.probs()[1], post.probs()[1], epsilon = 1e-12);
    }

    #[test]
    fn negative_prediction_matches_bayes() {
        let tc = TestChannel::new(0.7, 0.95).unwrap();
        let (b1, b0) = optimal_disbelief(&tc).unwrap();
        let p = prior(0.3);
        let d = predict_with_belief(b1, b0, &p, TestLabel::Negative).unwrap();
        let (post, _) = bayes2_posterior(&tc.to_shannon_channel(), &p, 0).unwrap();
        assert_abs_diff_eq!(d.probs()[0], post.probs()[0], epsilon = 1e-12);
    }
}
