mod common;

use std::collections::BTreeMap;

use approx::assert_abs_diff_eq;
use netadopt::adoption_game::{solve_equilibrium, PricingPolicy};
use netadopt::degree_dist::make_regular;
use netadopt::finite_game::{
    agent_payoffs, all_profiles, enumerate_pure_nash, is_pure_nash, profiles_csv, star_mixed, symmetric_mixed_complete,
    MixedSolution, Topology,
};
use proptest::prelude::*;

fn free() -> PricingPolicy {
    PricingPolicy::new(0.0, 0.0, 0.0).unwrap()
}

#[test]
fn star_of_three_at_zero_prices() {
    let params = common::baseline();
    let nash = enumerate_pure_nash(Topology::Star, 3, &params, &free()).unwrap();
    let labels: Vec<String> = nash.iter().map(|p| p.label()).collect();
    assert_eq!(labels, ["001", "110"]);
    // adopters get A_bar = 6, informed deferrers p A1H = 8
    assert_eq!(agent_payoffs(Topology::Star, &[true, true, false], &params, &free()), [6.0, 6.0, 8.0]);
    assert_eq!(agent_payoffs(Topology::Star, &[false, false, true], &params, &free()), [8.0, 8.0, 6.0]);
}

#[test]
fn complete_three_has_one_adopter() {
    let params = common::baseline();
    let nash = enumerate_pure_nash(Topology::Complete, 3, &params, &free()).unwrap();
    assert_eq!(nash.len(), 1);
    assert_eq!(nash[0].label(), "100");
    assert_eq!(nash[0].multiplicity, 3);
    for p in [[true, false, false], [false, true, false], [false, false, true]] {
        assert!(is_pure_nash(Topology::Complete, &p, &params, &free()));
    }
}

#[test]
fn pair_mixes_at_three_quarters() {
    let params = common::baseline();
    let w = symmetric_mixed_complete(2, &params, &free()).unwrap();
    assert!(matches!(w, MixedSolution::Interior(_)));
    assert_abs_diff_eq!(w.weight(), 0.75, epsilon = 1e-12);
}

#[test]
fn star_mixed_example() {
    let params = common::baseline();
    let (center, periphery) = star_mixed(3, &params, &free()).unwrap().unwrap();
    assert_abs_diff_eq!(center, 0.75, epsilon = 1e-12);
    assert_abs_diff_eq!(periphery, 0.5, epsilon = 1e-12);
}

#[test]
fn large_referrals_raise_mixing() {
    let params = common::baseline();
    let base = PricingPolicy::new(5.0, 12.0, 0.0).unwrap();
    let rich = PricingPolicy::new(5.0, 12.0, 25.0).unwrap();
    for n in 2..=10 {
        let w0 = symmetric_mixed_complete(n, &params, &base).unwrap().weight();
        let w1 = symmetric_mixed_complete(n, &params, &rich).unwrap().weight();
        assert!(w1 > w0, "n = {n}: {w1} <= {w0}");
    }
}

#[test]
fn size_limits() {
    let params = common::baseline();
    assert!(enumerate_pure_nash(Topology::Star, 12, &params, &free()).is_ok());
    assert!(enumerate_pure_nash(Topology::Star, 13, &params, &free()).is_err());
    assert!(enumerate_pure_nash(Topology::Complete, 21, &params, &free()).is_err());
    assert!(symmetric_mixed_complete(1, &params, &free()).is_err());
}

#[test]
fn csv_layout() {
    let params = common::baseline();
    let profiles: Vec<Vec<bool>> = all_profiles(2).collect();
    let text = profiles_csv(Topology::Complete, &profiles, &params, &free());
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "topology,n,profile,is_nash,payoff_vector");
    assert_eq!(lines.len(), 5);
    assert!(lines[2].starts_with("complete,2,01,true,"));
    assert!(!text.contains('\r'));
}

proptest! {
    #[test]
    fn mixing_weight_is_mean_field_access(params in common::params(), n in 2usize..=10,
                                          p0 in -5.0f64..20.0, p1 in 0.0f64..30.0, eta in prop_oneof![Just(0.0), 0.0f64..30.0]) {
        let policy = PricingPolicy::new(p0, p1, eta).unwrap();
        let w = symmetric_mixed_complete(n, &params, &policy).unwrap().weight();
        let eq = solve_equilibrium(&params, &policy, &make_regular(n as u32 - 1).unwrap()).unwrap();
        prop_assert!((w - eq.alpha_star).abs() <= 1e-8, "omega {w}, alpha* {}", eq.alpha_star);
    }

    #[test]
    fn counting_matches_profile_scan((params, policy, _) in common::game(), n in 2usize..=8) {
        let mut by_count: BTreeMap<usize, u64> = BTreeMap::new();
        for p in all_profiles(n) {
            if is_pure_nash(Topology::Complete, &p, &params, &policy) {
                *by_count.entry(p.iter().filter(|&&a| a).count()).or_default() += 1;
            }
        }
        let nash = enumerate_pure_nash(Topology::Complete, n, &params, &policy).unwrap();
        let counted: BTreeMap<usize, u64> =
            nash.iter().map(|p| (p.adopt_early.iter().filter(|&&a| a).count(), p.multiplicity)).collect();
        prop_assert_eq!(counted, by_count);
    }

    #[test]
    fn star_regimes((params, policy, _) in common::game(), n in 2usize..=7) {
        let nash = enumerate_pure_nash(Topology::Star, n, &params, &policy).unwrap();
        let labels: Vec<String> = nash.iter().map(|p| p.label()).collect();
        let adopt = params.a_bar() - policy.p0();
        let late = params.p() * (params.a1h() - policy.p1()).max(0.0);
        if adopt > late + 1e-9 {
            prop_assert_eq!(labels, vec!["1".repeat(n)]);
        } else if adopt < -1e-9 && policy.eta() == 0.0 {
            prop_assert_eq!(labels, vec!["0".repeat(n)]);
        } else if policy.eta() == 0.0 && adopt > 1e-9 && adopt < late - 1e-9 {
            // one side of the star adopts, the other listens
            let mut center = "0".repeat(n - 1);
            center.push('1');
            let mut rim = "1".repeat(n - 1);
            rim.push('0');
            prop_assert_eq!(labels, vec![center, rim]);
        }
    }
}
