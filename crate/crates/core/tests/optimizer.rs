mod common;

use approx::assert_abs_diff_eq;
use netadopt::adoption_game::{GameParams, PricingPolicy};
use netadopt::degree_dist::{edge_perspective, make_jackson_rogers, make_regular, make_two_degree, DegreeDistribution};
use netadopt::numeric::linspace;
use netadopt::optimizer::{
    optimize_capped_referral, optimize_full, optimize_referral, optimize_two_price, ReferralSearch,
};
use netadopt::pricing::{limit_profit, PolicyClass};
use proptest::prelude::*;
use rayon::prelude::*;

fn referral(params: &GameParams, f: &DegreeDistribution) -> f64 {
    optimize_referral(params, f, true, &ReferralSearch::default()).unwrap().best_profit
}

/// Best lower-threshold profit by a plain scan over the threshold index and
/// a 1e-5 grid of mixing weights.
fn lower_threshold_scan(params: &GameParams, f: &DegreeDistribution) -> f64 {
    let ft = edge_perspective(f);
    let n = f.len();
    let mut best = 0.0f64;
    for k in 0..n {
        for j in 0..=100_000 {
            let w = j as f64 * 1e-5;
            let mu: Vec<f64> = (0..n).map(|i| if i < k { 1.0 } else if i == k { w } else { 0.0 }).collect();
            let alpha: f64 = mu.iter().zip(ft.probs()).map(|(m, p)| m * p).sum();
            let value: f64 = f
                .iter()
                .zip(&mu)
                .map(|((d, fd), m)| {
                    fd * (m * params.a_bar() + (1.0 - m) * (1.0 - (1.0 - alpha).powi(d as i32)) * params.a1h())
                })
                .sum();
            best = best.max(value);
        }
    }
    best
}

#[test]
fn regular_one() {
    let params = common::baseline();
    let f = make_regular(1).unwrap();
    let r = optimize_two_price(&params, &f, true);
    assert_eq!((r.best_policy.p0(), r.best_policy.p1(), r.best_policy.eta()), (6.0, 20.0, 0.0));
    assert_abs_diff_eq!(r.best_profit, 8.45, epsilon = 1e-9);
    assert_abs_diff_eq!(r.equilibrium.alpha_star, 0.65, epsilon = 1e-6);
    assert_abs_diff_eq!(optimize_full(&params, &f, true).best_profit, 8.45, epsilon = 1e-9);
    let cap = optimize_capped_referral(&params, &f, 1, true, &ReferralSearch::default()).unwrap();
    let free = optimize_referral(&params, &f, true, &ReferralSearch::default()).unwrap();
    assert_eq!(cap.best_profit, free.best_profit);
    assert!(free.best_profit < 8.45);
}

#[test]
fn dense_regular_networks_approach_a1h() {
    let params = common::baseline();
    let f = make_regular(200).unwrap();
    let two = optimize_two_price(&params, &f, true).best_profit;
    let refer = referral(&params, &f);
    assert!(two >= 19.0 && refer >= 19.0 && two < 20.0 && refer < two, "{two} {refer}");
}

#[test]
fn regular_networks_favor_two_prices() {
    let params = common::baseline();
    for d in [2u32, 7, 30] {
        let f = make_regular(d).unwrap();
        let two = optimize_two_price(&params, &f, true).best_profit;
        let full = optimize_full(&params, &f, true).best_profit;
        assert_abs_diff_eq!(two, full, epsilon = 1e-6);
        assert!(two > referral(&params, &f), "d = {d}");
    }
}

#[test]
fn two_degree_proxy_two_price() {
    let params = common::baseline();
    let f = make_two_degree(1, 10_000, 0.01).unwrap();
    let two = optimize_two_price(&params, &f, true).best_profit;
    assert!((6.0..=6.5).contains(&two), "{two}");
}

#[test]
fn two_degree_referral_gap_persists() {
    // with a fixed hub share the hubs themselves hold back the late market
    let params = common::baseline();
    let gaps: Vec<f64> =
        [100u32, 1_000, 10_000].iter().map(|&du| 20.0 - referral(&params, &make_two_degree(1, du, 0.3).unwrap())).collect();
    for g in &gaps {
        assert!(*g > 1.0, "{gaps:?}");
    }
    assert!(gaps[2] > 0.5 * gaps[0], "{gaps:?}");
}

#[test]
fn jackson_rogers_mean_degree_crossing() {
    let params = common::baseline();
    let diff = |m: f64| {
        let f = make_jackson_rogers(m, 2.0, 200).unwrap();
        referral(&params, &f) - optimize_two_price(&params, &f, true).best_profit
    };
    for m in [3.0, 5.0] {
        assert!(diff(m) < 0.0, "m = {m}");
    }
    for m in [9.0, 12.0] {
        assert!(diff(m) > 0.0, "m = {m}");
    }
}

#[test]
fn cap_at_largest_degree_changes_nothing() {
    let params = common::baseline();
    let search = ReferralSearch::default();
    let f = make_two_degree(2, 9, 0.3).unwrap();
    let free = optimize_referral(&params, &f, true, &search).unwrap().best_profit;
    for cap in [9, 50] {
        let capped = optimize_capped_referral(&params, &f, cap, true, &search).unwrap().best_profit;
        assert_abs_diff_eq!(capped, free, epsilon = 1e-9);
    }
    assert!(optimize_capped_referral(&params, &f, 0, true, &search).is_err());
}

#[test]
fn low_cap_pays_at_small_mean_degree() {
    let params = common::baseline();
    let search = ReferralSearch::default();
    let f = make_jackson_rogers(3.0, 2.0, 200).unwrap();
    let free = optimize_referral(&params, &f, true, &search).unwrap().best_profit;
    let capped = optimize_capped_referral(&params, &f, 1, true, &search).unwrap();
    assert!(capped.best_profit >= free, "{} < {free}", capped.best_profit);
    assert_eq!(capped.best_policy.referral_cap(), Some(1));
}

#[test]
fn uninformed_regular_classes_coincide() {
    let params = common::baseline();
    let f = make_regular(5).unwrap();
    let two = optimize_two_price(&params, &f, false).best_profit;
    let full = optimize_full(&params, &f, false).best_profit;
    let refer = optimize_referral(&params, &f, false, &ReferralSearch::default()).unwrap().best_profit;
    assert_abs_diff_eq!(two, full, epsilon = 1e-6);
    assert_abs_diff_eq!(two, refer, epsilon = 1e-6);
    assert!(two < params.p() * params.a1h());
}

#[test]
fn two_price_matches_pattern_scan() {
    let params = common::baseline();
    for f in [
        make_two_degree(2, 9, 0.3).unwrap(),
        DegreeDistribution::from_pmf(&[(1, 0.2), (3, 0.3), (8, 0.4), (20, 0.1)], 20).unwrap(),
    ] {
        let r = optimize_two_price(&params, &f, true);
        assert_abs_diff_eq!(r.best_profit, lower_threshold_scan(&params, &f), epsilon = 1e-6);
    }
}

#[test]
fn two_price_matches_policy_grid() {
    let params = common::baseline();
    let cases = [
        DegreeDistribution::from_pmf(&[(1, 0.5), (4, 0.5)], 4).unwrap(),
        DegreeDistribution::from_pmf(&[(2, 0.3), (5, 0.2), (9, 0.2), (14, 0.2), (30, 0.1)], 30).unwrap(),
    ];
    let p0s = linspace(-5.0, params.a_bar(), 400);
    let p1s = linspace(0.0, params.a1h(), 400);
    for f in &cases {
        let opt = optimize_two_price(&params, f, true).best_profit;
        let grid = p0s
            .par_iter()
            .map(|&p0| {
                p1s.iter()
                    .map(|&p1| {
                        let policy = PricingPolicy::two_price(p0, p1).unwrap();
                        limit_profit(&params, &policy, f, PolicyClass::TwoPrice).unwrap().value
                    })
                    .fold(f64::NEG_INFINITY, f64::max)
            })
            .reduce(|| f64::NEG_INFINITY, f64::max);
        assert!(grid <= opt + 1e-9 && opt - grid <= 1e-3, "grid {grid}, optimizer {opt}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn full_class_dominates(params in common::params(), f in common::distribution(4, 25)) {
        let full = optimize_full(&params, &f, true).best_profit;
        let two = optimize_two_price(&params, &f, true).best_profit;
        let refer = referral(&params, &f);
        prop_assert!(full >= two - 1e-9, "full {full} < two-price {two}");
        prop_assert!(full >= refer - 1e-6, "full {full} < referral {refer}");
    }

    #[test]
    fn profits_bounded_by_late_surplus(params in common::params(), f in common::distribution(4, 25)) {
        let a1h = params.a1h();
        for informed in [true, false] {
            let bound = if informed { a1h } else { params.p() * a1h };
            let search = ReferralSearch::default();
            let values = [
                optimize_two_price(&params, &f, informed).best_profit,
                optimize_full(&params, &f, informed).best_profit,
                optimize_referral(&params, &f, informed, &search).unwrap().best_profit,
                optimize_capped_referral(&params, &f, 2, informed, &search).unwrap().best_profit,
            ];
            for v in values {
                prop_assert!(v <= bound + 1e-9, "{v} above {bound}");
            }
        }
    }

    #[test]
    fn referral_optimum_is_a_limit_profit(params in common::params(), f in common::distribution(4, 25)) {
        let r = optimize_referral(&params, &f, true, &ReferralSearch::default()).unwrap();
        prop_assert!(PolicyClass::Referral.contains(&r.best_policy));
        let again = limit_profit(&params, &r.best_policy, &f, PolicyClass::Referral).unwrap().value;
        prop_assert!((again - r.best_profit).abs() <= 1e-6 * (1.0 + again.abs()), "{again} vs {}", r.best_profit);
    }
}
