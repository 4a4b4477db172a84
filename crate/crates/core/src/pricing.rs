//! Profit, limit profit and welfare.
//!
//! With early fraction `beta`, late fraction `gamma_H` and expected referral
//! payments `phi_H` under high quality, an informed monopolist earns
//! `beta P0 + gamma_H P1 - phi_H eta`. An uninformed one prices under the
//! prior and earns `beta P0 + p (gamma_H P1 - phi_H eta)` in expectation.
//!
//! Profit at a policy is discontinuous where consumers are indifferent, so
//! optimal policies are evaluated through [`limit_profit`]: the best profit
//! along sequences of policies approaching the given one, prices from below
//! and the referral payment from above, within a policy class.

use std::fmt;
use std::str::FromStr;

use crate::adoption_game::{
    self, assemble, delta_payoff, expected_referrals, informed_prob, late_adoption_viable, GameParams,
    MeanFieldEquilibrium, PricingPolicy, INDIFF_TOL,
};
use crate::degree_dist::{edge_perspective, DegreeDistribution};
use crate::error::{Error, Result};
use crate::patterns::{best_double_threshold, best_lower_threshold};

/// Policy classes: two prices without referrals, a single price with
/// referrals, or unrestricted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PolicyClass {
    TwoPrice,
    Referral,
    Full,
}

impl PolicyClass {
    pub fn tag(&self) -> &'static str {
        match self {
            PolicyClass::TwoPrice => "two_price",
            PolicyClass::Referral => "referral",
            PolicyClass::Full => "full",
        }
    }

    /// Whether `policy` belongs to the class.
    pub fn contains(&self, policy: &PricingPolicy) -> bool {
        match self {
            PolicyClass::TwoPrice => policy.eta() == 0.0,
            PolicyClass::Referral => policy.p0() == policy.p1(),
            PolicyClass::Full => true,
        }
    }
}

impl fmt::Display for PolicyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for PolicyClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "two_price" | "two-price" | "D" => Ok(PolicyClass::TwoPrice),
            "referral" | "R" => Ok(PolicyClass::Referral),
            "full" => Ok(PolicyClass::Full),
            other => Err(Error::param(
                "class",
                format!("unknown policy class `{other}`, expected two_price, referral or full"),
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfitBreakdown {
    pub beta: f64,
    pub gamma_h: f64,
    pub phi_h: f64,
    pub revenue_early: f64,
    /// `gamma_H P1`, times `p` for an uninformed monopolist.
    pub revenue_late: f64,
    /// `phi_H eta`, times `p` for an uninformed monopolist.
    pub referral_cost: f64,
    pub total: f64,
    pub informed: bool,
}

/// Quality state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quality {
    High,
    Low,
}

/// `Σ f(d) (1 - mu(d)) (1 - (1 - alpha*)^d)`.
pub fn late_adopter_fraction(eq: &MeanFieldEquilibrium, f: &DegreeDistribution) -> f64 {
    eq.strategy
        .degrees()
        .iter()
        .zip(eq.strategy.mu())
        .map(|(&d, &m)| f.prob(d) * (1.0 - m) * informed_prob(eq.alpha_star, d))
        .sum()
}

/// `Σ f(d) mu(d) R(d, alpha*)`, the expected referral payments per capita.
pub fn expected_referral_cost(eq: &MeanFieldEquilibrium, f: &DegreeDistribution, cap: Option<u32>) -> f64 {
    eq.strategy
        .degrees()
        .iter()
        .zip(eq.strategy.mu())
        .map(|(&d, &m)| f.prob(d) * m * expected_referrals(cap, eq.alpha_star, d))
        .sum()
}

/// Profit of strategy `mu` (aligned with the support of `f`) at access `alpha`.
pub fn strategy_profit(
    params: &GameParams,
    policy: &PricingPolicy,
    f: &DegreeDistribution,
    mu: &[f64],
    alpha: f64,
) -> ProfitBreakdown {
    let viable = late_adoption_viable(params, policy);
    let (mut beta, mut gamma, mut phi) = (0.0, 0.0, 0.0);
    for ((d, fd), &m) in f.iter().zip(mu) {
        beta += fd * m;
        if viable {
            gamma += fd * (1.0 - m) * informed_prob(alpha, d);
            phi += fd * m * expected_referrals(policy.referral_cap(), alpha, d);
        }
    }
    let informed = policy.monopolist_informed();
    let scale = if informed { 1.0 } else { params.p() };
    let revenue_early = beta * policy.p0();
    let revenue_late = scale * gamma * policy.p1();
    let referral_cost = scale * phi * policy.eta();
    ProfitBreakdown {
        beta,
        gamma_h: gamma,
        phi_h: phi,
        revenue_early,
        revenue_late,
        referral_cost,
        total: revenue_early + revenue_late - referral_cost,
        informed,
    }
}

/// Profit at the equilibrium the solver returns for `policy`.
pub fn profit_at_policy(
    params: &GameParams,
    policy: &PricingPolicy,
    f: &DegreeDistribution,
) -> Result<ProfitBreakdown> {
    let eq = adoption_game::solve_equilibrium(params, policy, f)?;
    Ok(strategy_profit(params, policy, f, eq.strategy.mu(), eq.alpha_star))
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitProfit {
    pub value: f64,
    pub breakdown: ProfitBreakdown,
    /// Equilibrium whose strategy attains `value`.
    pub equilibrium: MeanFieldEquilibrium,
    /// True at `(A_bar, A1H, 0)`, where every degree is indifferent for
    /// every access level and the approach direction picks the pattern.
    pub degenerate: bool,
    /// True when the policy sits on a corner: degenerate, full or no early
    /// adoption, or a free second period combined with referrals.
    pub corner: bool,
}

const DEGENERATE_TOL: f64 = 1e-12;

/// Whether `policy` is the point `(A_bar, A1H, 0)`.
pub fn is_surplus_extraction_point(params: &GameParams, policy: &PricingPolicy) -> bool {
    (policy.p0() - params.a_bar()).abs() <= DEGENERATE_TOL
        && (policy.p1() - params.a1h()).abs() <= DEGENERATE_TOL
        && policy.eta() == 0.0
}

/// Limit profit of `policy` approached within `class`.
///
/// Away from `(A_bar, A1H, 0)` the equilibrium access level is unique and the
/// result is the best split of the residual early mass among the indifferent
/// degrees. At that point the class matters: two-price approaches keep
/// `eta = 0` and reach only lower-threshold patterns, while approaches that
/// let `eta` come down from above reach every double-threshold pattern.
pub fn limit_profit(
    params: &GameParams,
    policy: &PricingPolicy,
    f: &DegreeDistribution,
    class: PolicyClass,
) -> Result<LimitProfit> {
    let (mu, alpha, degenerate) = if is_surplus_extraction_point(params, policy) {
        let late = if policy.monopolist_informed() { params.a1h() } else { params.p() * params.a1h() };
        let pattern = match class {
            PolicyClass::TwoPrice => best_lower_threshold(f, params.a_bar(), late).0,
            PolicyClass::Referral | PolicyClass::Full => best_double_threshold(f, params.a_bar(), late).0,
        };
        (pattern.mu, pattern.alpha, true)
    } else {
        let eq = adoption_game::solve_equilibrium(params, policy, f)?;
        (best_allocation(params, policy, f, eq.alpha_star), eq.alpha_star, false)
    };
    let breakdown = strategy_profit(params, policy, f, &mu, alpha);
    let equilibrium = assemble(params, policy, f, mu, alpha);
    let corner = degenerate
        || alpha <= DEGENERATE_TOL
        || alpha >= 1.0 - DEGENERATE_TOL
        || (policy.p1() == 0.0 && policy.eta() > 0.0);
    Ok(LimitProfit { value: breakdown.total, breakdown, equilibrium, degenerate, corner })
}

/// Most profitable weak best response consistent with access `alpha`.
///
/// Strict adopters and deferrers are fixed; the remaining early mass goes to
/// indifferent degrees in decreasing order of profit per unit of `f~` mass,
/// which solves the linear program over allocations exactly.
fn best_allocation(params: &GameParams, policy: &PricingPolicy, f: &DegreeDistribution, alpha: f64) -> Vec<f64> {
    let ft = edge_perspective(f);
    let w = ft.probs();
    let viable = late_adoption_viable(params, policy);
    let scale = if policy.monopolist_informed() { 1.0 } else { params.p() };
    let mut mu = vec![0.0; f.len()];
    let mut strict = 0.0;
    let mut indifferent = Vec::new();
    for (i, (d, fd)) in f.iter().enumerate() {
        let dp = delta_payoff(params, policy, alpha, d);
        if dp > INDIFF_TOL {
            mu[i] = 1.0;
            strict += w[i];
        } else if dp >= -INDIFF_TOL && w[i] > 0.0 {
            let late = if viable {
                scale * (policy.p1() * informed_prob(alpha, d)
                    + policy.eta() * expected_referrals(policy.referral_cap(), alpha, d))
            } else {
                0.0
            };
            indifferent.push((i, fd * (policy.p0() - late) / w[i]));
        }
    }
    indifferent.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    let mut residual = (alpha - strict).max(0.0);
    for (i, _) in indifferent {
        if residual <= 0.0 {
            break;
        }
        let wt = (residual / w[i]).min(1.0);
        mu[i] = wt;
        residual -= wt * w[i];
    }
    mu
}

/// Total consumer value created, prices and referrals being transfers.
pub fn welfare(params: &GameParams, eq: &MeanFieldEquilibrium, f: &DegreeDistribution, theta: Quality) -> f64 {
    let beta = adoption_game::early_fraction(&eq.strategy, f);
    match theta {
        Quality::High => {
            beta * (params.a0h() + params.a1h()) + late_adopter_fraction(eq, f) * params.a1h()
        }
        Quality::Low => beta * params.a0l(),
    }
}
