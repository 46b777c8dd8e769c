use proptest::prelude::*;
use semchan_core::confirmation::{
    confirmation_from_counts, likelihood_ratios, optimal_disbelief, TestChannel,
};
use semchan_core::matching::match_truth_direct;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn ratios_are_reciprocal_disbelief(sens in 0.01f64..0.99, spec in 0.01f64..0.99) {
        let tc = TestChannel::new(sens, spec).unwrap();
        let (b1, b0) = optimal_disbelief(&tc).unwrap();
        let (lp, lm) = likelihood_ratios(&tc).unwrap();
        prop_assert!((lp.value() * b1 - 1.0).abs() <= 1e-12);
        prop_assert!((lm.value() * b0 - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn disbelief_is_direct_match(sens in 0.01f64..1.0, spec in 0.01f64..1.0) {
        prop_assume!(sens > 1.0 - spec);
        let tc = TestChannel::new(sens, spec).unwrap();
        let (b1, b0) = optimal_disbelief(&tc).unwrap();
        let ch = tc.to_shannon_channel();
        prop_assert!((match_truth_direct(&ch, 1).unwrap().values()[0] - b1).abs() <= 1e-12);
        prop_assert!((match_truth_direct(&ch, 0).unwrap().values()[1] - b0).abs() <= 1e-12);
    }

    #[test]
    fn confidence_level_bridge(np in 1u64..10_000, nc in 0u64..10_000) {
        prop_assume!(nc < np);
        let r = confirmation_from_counts(np, nc).unwrap();
        // 1/(2 − b*) with b* = (np − nc)/np is np/(np + nc) exactly in rationals
        let lhs_num = np;
        let lhs_den = 2 * np - (np - nc);
        prop_assert_eq!(lhs_den, np + nc);
        prop_assert!((r.cl - lhs_num as f64 / lhs_den as f64).abs() <= 1e-15);
        prop_assert!((r.cl - 1.0 / (2.0 - r.b_star)).abs() <= 1e-12);
    }

    #[test]
    fn belief_monotone_in_counts(np in 1u64..5_000, nc in 1u64..5_000) {
        let b = |p, c| confirmation_from_counts(p, c).unwrap().b_star;
        prop_assert!(b(np + 1, nc) > b(np, nc));
        prop_assert!(b(np, nc + 1) < b(np, nc));
    }
}
