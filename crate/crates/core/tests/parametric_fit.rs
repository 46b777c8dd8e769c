use approx::assert_abs_diff_eq;
use semchan_core::info::info_label;
use semchan_core::matching::{
    match_truth_direct, match_truth_parametric, match_truth_with_negatives, LabeledSample,
    TruthFamily,
};
use semchan_core::semantic::bayes3_forward;
use semchan_core::{Distribution, ParametricTruth, ShannonChannel, Support};

fn one_label(pos: Distribution) -> LabeledSample {
    LabeledSample::new(
        vec![pos],
        Distribution::point_mass(Support::indices(1).unwrap(), 0).unwrap(),
    )
    .unwrap()
}

fn fine_grid_oracle(support: &Support, prior: &Distribution, pos: &Distribution) -> (f64, f64) {
    let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
    for ci in 0..=200 {
        let c = 40.0 + ci as f64 * 0.1;
        for di in 0..=100 {
            let d = 5.0 + di as f64 * 0.1;
            let t = ParametricTruth::Gaussian {
                center: c,
                stddev: d,
            }
            .evaluate(support)
            .unwrap();
            let v = info_label(&t, prior, pos).unwrap();
            if v > best.0 {
                best = (v, c, d);
            }
        }
    }
    (best.1, best.2)
}

#[test]
fn gaussian_truth_is_recovered() {
    let s = Support::integer_range(0, 100).unwrap();
    let prior = Distribution::uniform(s.clone());
    let truth = ParametricTruth::Gaussian {
        center: 50.0,
        stddev: 10.0,
    }
    .evaluate(&s)
    .unwrap();
    let pos = bayes3_forward(&truth, &prior).unwrap();
    let fam = TruthFamily::Gaussian {
        center: (0.0, 100.0),
        stddev: (1.0, 40.0),
    };
    let fit = match_truth_parametric(&one_label(pos.clone()), &prior, 0, &fam).unwrap();
    let (oc, od) = fine_grid_oracle(&s, &prior, &pos);
    match fit {
        ParametricTruth::Gaussian { center, stddev } => {
            assert_abs_diff_eq!(center, 50.0, epsilon = 0.5);
            assert_abs_diff_eq!(stddev, 10.0, epsilon = 0.5);
            assert_abs_diff_eq!(center, oc, epsilon = 0.5);
            assert_abs_diff_eq!(stddev, od, epsilon = 0.5);
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn direct_match_beats_other_candidate() {
    let two = Support::indices(2).unwrap();
    let (sens, spec) = (0.9, 0.8);
    let ch = ShannonChannel::from_rows(
        two.clone(),
        two.clone(),
        vec![vec![spec, 1.0 - spec], vec![1.0 - sens, sens]],
    )
    .unwrap();
    let direct = match_truth_direct(&ch, 1).unwrap();
    let prior = Distribution::new(two.clone(), vec![0.7, 0.3]).unwrap();
    let (pos, _) = semchan_core::prob::bayes2_posterior(&ch, &prior, 1).unwrap();
    let matched =
        ParametricTruth::belief_with_disbelief(vec![false, true], direct.values()[0]).unwrap();
    let other = ParametricTruth::belief_with_disbelief(vec![false, true], 0.6).unwrap();
    let sample = one_label(pos.clone());
    for fam in [
        vec![matched.clone(), other.clone()],
        vec![other.clone(), matched.clone()],
    ] {
        let fit =
            match_truth_parametric(&sample, &prior, 0, &TruthFamily::Candidates(fam)).unwrap();
        assert_eq!(fit, matched);
    }
    let a = info_label(&matched.evaluate(&two).unwrap(), &prior, &pos).unwrap();
    let b = info_label(&other.evaluate(&two).unwrap(), &prior, &pos).unwrap();
    assert!(a > b);
}

fn logistic_family() -> TruthFamily {
    TruthFamily::Logistic {
        rate: (0.01, 2.0),
        midpoint: (0.0, 100.0),
        increasing: true,
    }
}

fn high_low() -> (Support, Distribution, Distribution) {
    let s = Support::integer_range(0, 100).unwrap();
    let pos = semchan_core::prob::discretized_gaussian(&s, 80.0, 6.0).unwrap();
    let neg = semchan_core::prob::discretized_gaussian(&s, 30.0, 8.0).unwrap();
    (s, pos, neg)
}

#[test]
fn without_negatives_both_fits_agree() {
    let (s, pos, _) = high_low();
    let prior = Distribution::uniform(s);
    let sample = one_label(pos);
    let fam = logistic_family();
    assert_eq!(
        match_truth_parametric(&sample, &prior, 0, &fam).unwrap(),
        match_truth_with_negatives(&sample, &prior, 0, &fam).unwrap()
    );
}

#[test]
fn negatives_place_midpoint_between_masses() {
    let (s, pos, neg) = high_low();
    let prior = Distribution::from_weights(
        s.clone(),
        pos.probs()
            .iter()
            .zip(neg.probs())
            .map(|(a, b)| a + b)
            .collect(),
    )
    .unwrap();
    let sample = one_label(pos).with_negative(0, neg).unwrap();
    match match_truth_with_negatives(&sample, &prior, 0, &logistic_family()).unwrap() {
        ParametricTruth::Logistic { midpoint, .. } => {
            assert!(midpoint > 30.0 && midpoint < 80.0, "midpoint {midpoint}");
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn unclear_instances_leave_argmax_unchanged() {
    let (s, pos, neg) = high_low();
    let labelled: Vec<f64> = pos
        .probs()
        .iter()
        .zip(neg.probs())
        .map(|(a, b)| a + b)
        .collect();
    let prior = Distribution::from_weights(s.clone(), labelled.clone()).unwrap();
    let padded =
        Distribution::from_weights(s.clone(), labelled.iter().map(|v| v + 0.02).collect()).unwrap();
    let sample = one_label(pos).with_negative(0, neg).unwrap();
    let a = match_truth_with_negatives(&sample, &prior, 0, &logistic_family()).unwrap();
    let b = match_truth_with_negatives(&sample, &padded, 0, &logistic_family()).unwrap();
    println!("{a:?}\n{b:?}");
    assert_eq!(a, b);
}
