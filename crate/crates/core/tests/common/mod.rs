#![allow(dead_code)]

use netadopt::adoption_game::{GameParams, PricingPolicy};
use netadopt::degree_dist::DegreeDistribution;
use proptest::prelude::*;

pub fn baseline() -> GameParams {
    GameParams::new(10.0, 20.0, -10.0, -20.0, 0.4).unwrap()
}

/// Parameter sets satisfying both model assumptions.
pub fn params() -> impl Strategy<Value = GameParams> {
    (0.05f64..0.95, 1.0f64..30.0, 1.0f64..30.0, 1.05f64..3.0, 1.05f64..3.0).prop_filter_map(
        "assumptions",
        |(p, a0h, a1h, k0, k1)| {
            let scale = p / (1.0 - p);
            GameParams::new(a0h, a1h, -scale * a0h * k0, -scale * a1h * k1, p).ok()
        },
    )
}

/// Distributions on at most `support` distinct degrees in `1..=max_degree`.
pub fn distribution(support: usize, max_degree: u32) -> impl Strategy<Value = DegreeDistribution> {
    prop::collection::btree_map(1..=max_degree, 0.05f64..1.0, 1..=support).prop_map(move |m| {
        let pairs: Vec<(u32, f64)> = m.into_iter().collect();
        DegreeDistribution::from_weights(&pairs, max_degree).unwrap()
    })
}

/// Policies around the interesting region for `params`, a quarter of them
/// without referrals.
pub fn policy(params: GameParams) -> impl Strategy<Value = PricingPolicy> {
    let a_bar = params.a_bar();
    let a1h = params.a1h();
    let low = a_bar - params.p() * a1h - 2.0;
    (low..a_bar + 2.0, 0.0..1.2 * a1h, prop_oneof![1 => Just(0.0), 3 => 0.0..2.0 * a1h])
        .prop_map(|(p0, p1, eta)| PricingPolicy::new(p0, p1, eta).unwrap())
}

pub fn game() -> impl Strategy<Value = (GameParams, PricingPolicy, DegreeDistribution)> {
    params().prop_flat_map(|g| (Just(g), policy(g), distribution(6, 40)))
}
