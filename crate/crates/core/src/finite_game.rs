//! Exact analysis of the finite game on complete and star networks.
//!
//! Actions are deterministic per profile, so expected payoffs only average
//! over the quality state. An early adopter earns `A_bar - P0` plus `eta p`
//! per deferring neighbor (each of them is informed by the adopter and buys
//! late when quality is high). A deferring agent earns `p (A1H - P1)^+` if at
//! least one neighbor adopted early and nothing otherwise.

use crate::adoption_game::{late_adoption_viable, late_surplus, GameParams, PricingPolicy};
use crate::error::{Error, Result};
use crate::format;
use crate::numeric::bisect_decreasing;

pub const MAX_COMPLETE: usize = 20;
pub const MAX_STAR: usize = 12;

/// Slack on deviation gains.
const NASH_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Topology {
    Complete,
    Star,
}

impl Topology {
    pub fn tag(&self) -> &'static str {
        match self {
            Topology::Complete => "complete",
            Topology::Star => "star",
        }
    }

    /// Neighbors of agent `i`; on the star the last agent is the center.
    pub fn neighbors(&self, n: usize, i: usize) -> Vec<usize> {
        match self {
            Topology::Complete => (0..n).filter(|&j| j != i).collect(),
            Topology::Star if i == n - 1 => (0..n - 1).collect(),
            Topology::Star => vec![n - 1],
        }
    }
}

/// A pure profile. On complete networks one profile stands for all
/// `multiplicity` permutations with the same number of adopters.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteProfile {
    pub topology: Topology,
    pub n: usize,
    pub adopt_early: Vec<bool>,
    pub multiplicity: u64,
}

impl FiniteProfile {
    /// Bit string, agent 1 first.
    pub fn label(&self) -> String {
        self.adopt_early.iter().map(|&a| if a { '1' } else { '0' }).collect()
    }
}

struct Payoffs {
    adopt_base: f64,
    per_referral: f64,
    informed_defer: f64,
}

impl Payoffs {
    fn new(params: &GameParams, policy: &PricingPolicy) -> Self {
        let viable = late_adoption_viable(params, policy);
        Self {
            adopt_base: params.a_bar() - policy.p0(),
            per_referral: if viable { policy.eta() * params.p() } else { 0.0 },
            informed_defer: params.p() * late_surplus(params, policy),
        }
    }

    fn adopt(&self, deferring_neighbors: usize) -> f64 {
        self.adopt_base + self.per_referral * deferring_neighbors as f64
    }

    fn defer(&self, adopting_neighbors: usize) -> f64 {
        if adopting_neighbors > 0 {
            self.informed_defer
        } else {
            0.0
        }
    }
}

fn check_n(topology: Topology, n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::param("n", "at least two agents are required"));
    }
    let max = match topology {
        Topology::Complete => MAX_COMPLETE,
        Topology::Star => MAX_STAR,
    };
    if n > max {
        return Err(Error::TooLarge { what: "n", value: n, max });
    }
    Ok(())
}

/// Expected payoff of every agent under a pure profile.
pub fn agent_payoffs(topology: Topology, profile: &[bool], params: &GameParams, policy: &PricingPolicy) -> Vec<f64> {
    let n = profile.len();
    let pay = Payoffs::new(params, policy);
    (0..n)
        .map(|i| {
            let nb = topology.neighbors(n, i);
            let adopters = nb.iter().filter(|&&j| profile[j]).count();
            if profile[i] {
                pay.adopt(nb.len() - adopters)
            } else {
                pay.defer(adopters)
            }
        })
        .collect()
}

/// Whether no agent gains by switching its action.
pub fn is_pure_nash(topology: Topology, profile: &[bool], params: &GameParams, policy: &PricingPolicy) -> bool {
    let n = profile.len();
    let pay = Payoffs::new(params, policy);
    (0..n).all(|i| {
        let nb = topology.neighbors(n, i);
        let adopters = nb.iter().filter(|&&j| profile[j]).count();
        let adopt = pay.adopt(nb.len() - adopters);
        let defer = pay.defer(adopters);
        if profile[i] {
            adopt >= defer - NASH_TOL
        } else {
            defer >= adopt - NASH_TOL
        }
    })
}

fn binomial(n: usize, k: usize) -> u64 {
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

/// All pure Nash profiles.
///
/// Complete networks are enumerated by adopter count and each count is
/// reported once, its first agents adopting. Stars are enumerated profile by
/// profile in lexicographic order.
///
/// # Errors
/// `n` above 20 (complete) or 12 (star), or below 2.
pub fn enumerate_pure_nash(
    topology: Topology,
    n: usize,
    params: &GameParams,
    policy: &PricingPolicy,
) -> Result<Vec<FiniteProfile>> {
    check_n(topology, n)?;
    let out = match topology {
        Topology::Complete => {
            let pay = Payoffs::new(params, policy);
            (0..=n)
                .filter(|&k| {
                    let adopter_ok = k == 0 || pay.adopt(n - k) >= pay.defer(k - 1) - NASH_TOL;
                    let defer_ok = k == n || pay.defer(k) >= pay.adopt(n - k - 1) - NASH_TOL;
                    adopter_ok && defer_ok
                })
                .map(|k| FiniteProfile {
                    topology,
                    n,
                    adopt_early: (0..n).map(|i| i < k).collect(),
                    multiplicity: binomial(n, k),
                })
                .collect()
        }
        Topology::Star => all_profiles(n)
            .filter(|p| is_pure_nash(topology, p, params, policy))
            .map(|p| FiniteProfile { topology, n, adopt_early: p, multiplicity: 1 })
            .collect(),
    };
    Ok(out)
}

/// Every pure profile of `n` agents, lexicographic with agent 1 most
/// significant and "defer" first.
pub fn all_profiles(n: usize) -> impl Iterator<Item = Vec<bool>> {
    (0u64..1 << n).map(move |bits| (0..n).map(|i| bits >> (n - 1 - i) & 1 == 1).collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MixedSolution {
    Interior(f64),
    /// No interior root; the weight is 0 or 1.
    Corner(f64),
}

impl MixedSolution {
    pub fn weight(&self) -> f64 {
        match *self {
            MixedSolution::Interior(w) | MixedSolution::Corner(w) => w,
        }
    }
}

/// Symmetric mixing weight on the complete network of `n` agents, solving
/// `A_bar - P0 + p eta (1-w)(n-1) = p (1 - (1-w)^(n-1)) (A1H - P1)^+`.
pub fn symmetric_mixed_complete(n: usize, params: &GameParams, policy: &PricingPolicy) -> Result<MixedSolution> {
    check_n(Topology::Complete, n)?;
    let pay = Payoffs::new(params, policy);
    let m = (n - 1) as f64;
    let g = |w: f64| {
        pay.adopt_base + pay.per_referral * (1.0 - w) * m - pay.informed_defer * (1.0 - (1.0 - w).powi(n as i32 - 1))
    };
    Ok(root_or_corner(g))
}

fn root_or_corner<G: Fn(f64) -> f64>(g: G) -> MixedSolution {
    if g(0.0) <= 0.0 {
        return MixedSolution::Corner(0.0);
    }
    if g(1.0) >= 0.0 {
        return MixedSolution::Corner(1.0);
    }
    let (lo, hi) = bisect_decreasing(&g, 0.0, 1.0, 0.0, 200);
    MixedSolution::Interior(0.5 * (lo + hi))
}

/// Mixed profile on the star where the center adopts with probability
/// `w_center` and every peripheral agent with `w_periphery`, both interior.
///
/// Returns `None` when the coupled indifference conditions have no interior
/// solution. This is one family of mixed equilibria, not all of them.
pub fn star_mixed(n: usize, params: &GameParams, policy: &PricingPolicy) -> Result<Option<(f64, f64)>> {
    check_n(Topology::Star, n)?;
    let pay = Payoffs::new(params, policy);
    // periphery indifference is linear in the center's weight
    let denom = pay.per_referral + pay.informed_defer;
    if denom <= 0.0 {
        return Ok(None);
    }
    let w_center = (pay.adopt_base + pay.per_referral) / denom;
    if !(w_center > 0.0 && w_center < 1.0) {
        return Ok(None);
    }
    let m = (n - 1) as f64;
    let g = |w: f64| {
        pay.adopt_base + pay.per_referral * m * (1.0 - w) - pay.informed_defer * (1.0 - (1.0 - w).powi(n as i32 - 1))
    };
    match root_or_corner(g) {
        MixedSolution::Interior(w_periphery) => Ok(Some((w_center, w_periphery))),
        MixedSolution::Corner(_) => Ok(None),
    }
}

/// CSV `topology,n,profile,is_nash,payoff_vector`; payoffs are separated by
/// semicolons.
pub fn profiles_csv(
    topology: Topology,
    profiles: &[Vec<bool>],
    params: &GameParams,
    policy: &PricingPolicy,
) -> String {
    let mut out = format::row(&["topology", "n", "profile", "is_nash", "payoff_vector"]);
    for p in profiles {
        let label: String = p.iter().map(|&a| if a { '1' } else { '0' }).collect();
        let payoffs: Vec<String> = agent_payoffs(topology, p, params, policy).into_iter().map(format::real).collect();
        out.push_str(&format::row(&[
            topology.tag().to_string(),
            p.len().to_string(),
            label,
            is_pure_nash(topology, p, params, policy).to_string(),
            payoffs.join(";"),
        ]));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_counts() {
        assert_eq!(binomial(20, 10), 184_756);
        assert_eq!(binomial(5, 0), 1);
    }

    #[test]
    fn bounds_enforced() {
        let params = GameParams::default();
        let policy = PricingPolicy::new(0.0, 0.0, 0.0).unwrap();
        assert!(matches!(
            enumerate_pure_nash(Topology::Star, 13, &params, &policy),
            Err(Error::TooLarge { .. })
        ));
        assert!(enumerate_pure_nash(Topology::Complete, 20, &params, &policy).is_ok());
        assert!(enumerate_pure_nash(Topology::Complete, 1, &params, &policy).is_err());
    }
}
