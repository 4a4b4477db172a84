//! Adopt-or-defer payoffs and the mean-field equilibrium.
//!
//! An agent of degree `d` facing informational access `alpha` (the chance
//! that a random neighbor adopted early) compares
//!
//! ```text
//! adopt early : A_bar - P0 + eta * p * R(d, alpha)
//! defer       : p * (A1H - P1)^+ * (1 - (1 - alpha)^d)
//! ```
//!
//! where `R(d, alpha)` is the expected number of neighbors who adopt late
//! when quality is high, `(1 - alpha) d` with linear referrals or
//! `E[min(Bin(d, 1 - alpha), cap)]` with a cap. Late adoption happens only
//! when `P1 <= A1H`; above that price nobody buys in the second period and
//! both the deferral value and the referral stream vanish.
//!
//! The difference `ΔΠ(alpha, d)` is strictly decreasing in `alpha` for every
//! degree that can learn something, so the population map
//! `alpha -> Σ f~(d) BR_d(alpha)` is monotone and has a unique fixed point.
//! [`solve_equilibrium`] brackets it by bisection on the upper and lower
//! envelopes of that map and then polishes the mixing weight.

use std::fmt;

use crate::binomial::capped_binomial_mean;
use crate::degree_dist::{edge_perspective, DegreeDistribution, EdgePerspectiveDistribution};
use crate::error::{Error, Result};
use crate::format;
use crate::numeric::bisect_decreasing;

/// Default tolerance, in payoff units, for classifying indifference.
pub const INDIFF_TOL: f64 = 1e-9;

/// Below this distance from 0 or 1 a mixing weight counts as pure.
const PURE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GameParams {
    a0h: f64,
    a1h: f64,
    a0l: f64,
    a1l: f64,
    p: f64,
}

/// The three quantities whose signs the model assumptions fix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AssumptionAudit {
    /// `p A1H + (1-p) A1L`, must be negative.
    pub late_prior_value: f64,
    /// `p A0H + (1-p) A0L`, must be negative.
    pub early_prior_value: f64,
    /// `A_bar`, must lie below `p A1H`.
    pub a_bar: f64,
    pub p_a1h: f64,
}

impl AssumptionAudit {
    pub fn holds(&self) -> bool {
        self.late_prior_value < 0.0 && self.early_prior_value < 0.0 && self.a_bar < self.p_a1h
    }
}

impl GameParams {
    /// Validated parameter set.
    ///
    /// # Errors
    /// Sign constraints (`A0H, A1H > 0 > A0L, A1L`, `0 < p < 1`) and the two
    /// model assumptions are checked in that order.
    pub fn new(a0h: f64, a1h: f64, a0l: f64, a1l: f64, p: f64) -> Result<Self> {
        let all = [("a0h", a0h), ("a1h", a1h), ("a0l", a0l), ("a1l", a1l), ("p", p)];
        for (name, v) in all {
            if !v.is_finite() {
                return Err(Error::param(name, format!("{v} is not finite")));
            }
        }
        if a0h <= 0.0 {
            return Err(Error::param("a0h", "first-period high value must be positive"));
        }
        if a1h <= 0.0 {
            return Err(Error::param("a1h", "second-period high value must be positive"));
        }
        if a0l >= 0.0 {
            return Err(Error::param("a0l", "first-period low value must be negative"));
        }
        if a1l >= 0.0 {
            return Err(Error::param("a1l", "second-period low value must be negative"));
        }
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::param("p", "prior must lie strictly between 0 and 1"));
        }
        let params = Self { a0h, a1h, a0l, a1l, p };
        let audit = params.audit();
        if audit.late_prior_value >= 0.0 {
            return Err(Error::AssumptionViolated {
                rule: "p*A1H + (1-p)*A1L < 0",
                detail: format!("value is {}", audit.late_prior_value),
            });
        }
        if audit.early_prior_value >= 0.0 {
            return Err(Error::AssumptionViolated {
                rule: "p*A0H + (1-p)*A0L < 0",
                detail: format!("value is {}", audit.early_prior_value),
            });
        }
        if audit.a_bar >= audit.p_a1h {
            return Err(Error::AssumptionViolated {
                rule: "A_bar < p*A1H",
                detail: format!("A_bar = {}, p*A1H = {}", audit.a_bar, audit.p_a1h),
            });
        }
        Ok(params)
    }

    pub fn a0h(&self) -> f64 {
        self.a0h
    }
    pub fn a1h(&self) -> f64 {
        self.a1h
    }
    pub fn a0l(&self) -> f64 {
        self.a0l
    }
    pub fn a1l(&self) -> f64 {
        self.a1l
    }
    pub fn p(&self) -> f64 {
        self.p
    }

    /// Expected total value of adopting early, `p (A0H + A1H) + (1-p) A0L`.
    pub fn a_bar(&self) -> f64 {
        self.p * (self.a0h + self.a1h) + (1.0 - self.p) * self.a0l
    }

    pub fn audit(&self) -> AssumptionAudit {
        AssumptionAudit {
            late_prior_value: self.p * self.a1h + (1.0 - self.p) * self.a1l,
            early_prior_value: self.p * self.a0h + (1.0 - self.p) * self.a0l,
            a_bar: self.a_bar(),
            p_a1h: self.p * self.a1h,
        }
    }
}

impl Default for GameParams {
    /// `(A0H, A1H, A0L, A1L, p) = (10, 20, -10, -20, 0.4)`, so `A_bar = 6`.
    fn default() -> Self {
        Self { a0h: 10.0, a1h: 20.0, a0l: -10.0, a1l: -20.0, p: 0.4 }
    }
}

/// Prices `(P0, P1)`, referral payment `eta`, optional referral cap and
/// whether the monopolist knows the quality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PricingPolicy {
    p0: f64,
    p1: f64,
    eta: f64,
    referral_cap: Option<u32>,
    monopolist_informed: bool,
}

impl PricingPolicy {
    /// Informed monopolist with linear referrals.
    pub fn new(p0: f64, p1: f64, eta: f64) -> Result<Self> {
        if !p0.is_finite() {
            return Err(Error::param("p0", format!("{p0} is not finite")));
        }
        if !(p1 >= 0.0) || !p1.is_finite() {
            return Err(Error::param("p1", format!("second-period price must be nonnegative, got {p1}")));
        }
        if !(eta >= 0.0) || !eta.is_finite() {
            return Err(Error::param("eta", format!("referral payment must be nonnegative, got {eta}")));
        }
        Ok(Self { p0, p1, eta, referral_cap: None, monopolist_informed: true })
    }

    /// Policy with `eta = 0`.
    pub fn two_price(p0: f64, p1: f64) -> Result<Self> {
        Self::new(p0, p1, 0.0)
    }

    /// Policy with a single price `P0 = P1 = price`.
    pub fn referral(price: f64, eta: f64) -> Result<Self> {
        Self::new(price, price, eta)
    }

    /// Caps the number of paid referrals per early adopter.
    pub fn with_cap(mut self, cap: Option<u32>) -> Result<Self> {
        if cap == Some(0) {
            return Err(Error::param("cap", "referral cap must be at least 1"));
        }
        self.referral_cap = cap;
        Ok(self)
    }

    pub fn with_informed(mut self, informed: bool) -> Self {
        self.monopolist_informed = informed;
        self
    }

    pub fn p0(&self) -> f64 {
        self.p0
    }
    pub fn p1(&self) -> f64 {
        self.p1
    }
    pub fn eta(&self) -> f64 {
        self.eta
    }
    pub fn referral_cap(&self) -> Option<u32> {
        self.referral_cap
    }
    pub fn monopolist_informed(&self) -> bool {
        self.monopolist_informed
    }
}

/// Expected number of late-adopting neighbors of an early adopter of
/// degree `d` when quality is high: `(1-alpha) d`, or the binomial count
/// truncated at `cap`.
pub fn expected_referrals(cap: Option<u32>, alpha: f64, d: u32) -> f64 {
    match cap {
        Some(c) if c < d => capped_binomial_mean(d, 1.0 - alpha, c),
        _ => (1.0 - alpha) * d as f64,
    }
}

/// `(A1H - P1)^+`, the surplus of a late adopter when quality is high.
pub fn late_surplus(params: &GameParams, policy: &PricingPolicy) -> f64 {
    (params.a1h - policy.p1).max(0.0)
}

/// Whether anyone buys in the second period.
pub fn late_adoption_viable(params: &GameParams, policy: &PricingPolicy) -> bool {
    policy.p1 <= params.a1h
}

/// Chance that at least one of `d` neighbors adopted early.
pub fn informed_prob(alpha: f64, d: u32) -> f64 {
    1.0 - (1.0 - alpha).powi(d as i32)
}

pub fn payoff_adopt(params: &GameParams, policy: &PricingPolicy, alpha: f64, d: u32) -> f64 {
    let referrals = if late_adoption_viable(params, policy) && policy.eta > 0.0 {
        policy.eta * params.p * expected_referrals(policy.referral_cap, alpha, d)
    } else {
        0.0
    };
    params.a_bar() - policy.p0 + referrals
}

pub fn payoff_defer(params: &GameParams, policy: &PricingPolicy, alpha: f64, d: u32) -> f64 {
    params.p * late_surplus(params, policy) * informed_prob(alpha, d)
}

/// `ΔΠ(alpha, d)`: value of adopting early minus value of deferring.
pub fn delta_payoff(params: &GameParams, policy: &PricingPolicy, alpha: f64, d: u32) -> f64 {
    payoff_adopt(params, policy, alpha, d) - payoff_defer(params, policy, alpha, d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BestResponse {
    Adopt,
    Defer,
    Indifferent,
}

impl BestResponse {
    pub fn classify(delta: f64, tol: f64) -> Self {
        if delta > tol {
            BestResponse::Adopt
        } else if delta < -tol {
            BestResponse::Defer
        } else {
            BestResponse::Indifferent
        }
    }
}

pub fn best_response(params: &GameParams, policy: &PricingPolicy, alpha: f64, d: u32) -> BestResponse {
    BestResponse::classify(delta_payoff(params, policy, alpha, d), INDIFF_TOL)
}

/// Adoption probability per degree, aligned with a distribution's support.
#[derive(Debug, Clone, PartialEq)]
pub struct MeanFieldStrategy {
    degrees: Vec<u32>,
    mu: Vec<f64>,
}

impl MeanFieldStrategy {
    pub fn new(degrees: Vec<u32>, mu: Vec<f64>) -> Result<Self> {
        if degrees.len() != mu.len() {
            return Err(Error::param("mu", "length differs from the support"));
        }
        if let Some(v) = mu.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::param("mu", format!("{v} is not a probability")));
        }
        Ok(Self { degrees, mu })
    }

    /// Constant strategy over the support of `f`.
    pub fn constant(f: &DegreeDistribution, value: f64) -> Self {
        Self { degrees: f.degrees().to_vec(), mu: vec![value.clamp(0.0, 1.0); f.len()] }
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    pub fn get(&self, d: u32) -> Option<f64> {
        self.degrees.binary_search(&d).ok().map(|i| self.mu[i])
    }
}

/// Threshold degree; `Infinite` marks an upper threshold beyond the support
/// or full adoption.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Threshold {
    Finite(u32),
    Infinite,
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Threshold::Finite(d) => write!(f, "{d}"),
            Threshold::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeanFieldEquilibrium {
    pub strategy: MeanFieldStrategy,
    pub alpha_star: f64,
    pub d_lower: Threshold,
    pub d_upper: Threshold,
    pub mixing_degrees: Vec<u32>,
    /// Bisection steps taken; zero for corner and assembled equilibria.
    pub iterations: usize,
    pub bracket: (f64, f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub alpha_tol: f64,
    pub max_iter: usize,
    pub indiff_tol: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { alpha_tol: 1e-10, max_iter: 200, indiff_tol: INDIFF_TOL }
    }
}

/// Unique mean-field equilibrium with default solver settings.
pub fn solve_equilibrium(
    params: &GameParams,
    policy: &PricingPolicy,
    f: &DegreeDistribution,
) -> Result<MeanFieldEquilibrium> {
    solve_equilibrium_with(params, policy, f, &SolverConfig::default())
}

/// Unique mean-field equilibrium.
///
/// # Errors
/// [`Error::NotConverged`] with the final bracket when `max_iter` bisection
/// steps do not shrink the bracket below `alpha_tol`.
pub fn solve_equilibrium_with(
    params: &GameParams,
    policy: &PricingPolicy,
    f: &DegreeDistribution,
    cfg: &SolverConfig,
) -> Result<MeanFieldEquilibrium> {
    let ft = edge_perspective(f);
    let degrees = f.degrees();
    let w = ft.probs();
    let tol = cfg.indiff_tol;
    let dp = |alpha: f64, d: u32| delta_payoff(params, policy, alpha, d);

    if params.a_bar() - policy.p0 >= params.p * late_surplus(params, policy) {
        let mu = vec![1.0; degrees.len()];
        return Ok(assemble(params, policy, f, mu, 1.0));
    }

    let envelopes = |alpha: f64| {
        let (mut lo, mut hi) = (0.0, 0.0);
        for (&d, &wd) in degrees.iter().zip(w) {
            let v = dp(alpha, d);
            if v > tol {
                lo += wd;
            }
            if v >= -tol {
                hi += wd;
            }
        }
        (lo, hi)
    };

    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    let mut iterations = 0;
    while hi - lo > cfg.alpha_tol {
        if iterations >= cfg.max_iter {
            return Err(Error::NotConverged { iterations, lo, hi });
        }
        iterations += 1;
        let mid = 0.5 * (lo + hi);
        let (phi_min, phi_max) = envelopes(mid);
        if phi_max < mid {
            hi = mid;
        } else if phi_min > mid {
            lo = mid;
        } else {
            lo = mid;
            hi = mid;
        }
    }

    // strict across the whole bracket, or still undecided
    let mut strict_mass = 0.0;
    let mut cand_mass = 0.0;
    let mut mu = vec![0.0; degrees.len()];
    let mut candidates = Vec::new();
    for (i, &d) in degrees.iter().enumerate() {
        if dp(hi, d) > tol {
            mu[i] = 1.0;
            strict_mass += w[i];
        } else if dp(lo, d) >= -tol {
            candidates.push(i);
            cand_mass += w[i];
        }
    }

    let mut alpha = strict_mass;
    if let Some(&i) = candidates.iter().find(|&&i| w[i] > 0.0) {
        let d = degrees[i];
        // the bracket may have stopped inside the indifference band; widen
        // it until it straddles the exact root of this degree
        let (mut a, mut b) = (lo, hi);
        let mut step = cfg.alpha_tol.max(1e-12);
        while a > 0.0 && dp(a, d) < 0.0 {
            a = (a - step).max(0.0);
            step *= 4.0;
        }
        let mut step = cfg.alpha_tol.max(1e-12);
        while b < 1.0 && dp(b, d) > 0.0 {
            b = (b + step).min(1.0);
            step *= 4.0;
        }
        let root = if dp(b, d) >= 0.0 {
            b
        } else if dp(a, d) <= 0.0 {
            a
        } else {
            let (x, y) = bisect_decreasing(|x| dp(x, d), a, b, 0.0, 200);
            0.5 * (x + y)
        };
        alpha = root.clamp(strict_mass, strict_mass + cand_mass);
        let mut residual = alpha - strict_mass;
        for &j in &candidates {
            if w[j] > 0.0 && residual > 0.0 {
                let wt = (residual / w[j]).clamp(0.0, 1.0);
                mu[j] = wt;
                residual -= wt * w[j];
            }
        }
    }

    let mut eq = assemble(params, policy, f, mu, alpha);
    eq.iterations = iterations;
    eq.bracket = (lo, hi);
    Ok(eq)
}

/// Packages a strategy and its informational access as an equilibrium
/// record, computing thresholds and mixing degrees.
///
/// No best-response check is made; callers pass consistent inputs.
pub fn assemble(
    params: &GameParams,
    policy: &PricingPolicy,
    f: &DegreeDistribution,
    mu: Vec<f64>,
    alpha: f64,
) -> MeanFieldEquilibrium {
    let degrees = f.degrees().to_vec();
    let slope_up = |d: u32| delta_payoff(params, policy, alpha, d + 1) - delta_payoff(params, policy, alpha, d) > 0.0;
    let (d_lower, d_upper) = thresholds_from(&degrees, &mu, slope_up);
    let mixing_degrees = degrees
        .iter()
        .zip(&mu)
        .filter(|(_, &m)| m > PURE_TOL && m < 1.0 - PURE_TOL)
        .map(|(&d, _)| d)
        .collect();
    MeanFieldEquilibrium {
        strategy: MeanFieldStrategy { degrees, mu },
        alpha_star: alpha,
        d_lower,
        d_upper,
        mixing_degrees,
        iterations: 0,
        bracket: (alpha, alpha),
    }
}

/// Threshold pair `(d_L, d_U)` of an equilibrium.
pub fn thresholds(eq: &MeanFieldEquilibrium) -> (Threshold, Threshold) {
    (eq.d_lower, eq.d_upper)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Level {
    One,
    Zero,
    Mixed,
}

fn level(m: f64) -> Level {
    if m >= 1.0 - PURE_TOL {
        Level::One
    } else if m <= PURE_TOL {
        Level::Zero
    } else {
        Level::Mixed
    }
}

/// Canonical thresholds for a strategy over ascending `degrees`.
///
/// The non-adopting block runs from the first to the last degree with
/// `mu < 1`; its end points become `d_L` and `d_U`. An end point with no
/// adopters beyond it becomes the `0` or `inf` sentinel. A lone mixing
/// degree at the edge of the support is placed by `slope_up`: where `ΔΠ`
/// rises with degree it is the upper threshold, otherwise the lower one.
/// Full adoption is `(inf, inf)` and no adoption `(0, inf)`.
pub fn thresholds_from<S: Fn(u32) -> bool>(degrees: &[u32], mu: &[f64], slope_up: S) -> (Threshold, Threshold) {
    let levels: Vec<Level> = mu.iter().map(|&m| level(m)).collect();
    let Some(lo) = levels.iter().position(|&l| l != Level::One) else {
        return (Threshold::Infinite, Threshold::Infinite);
    };
    let hi = levels.iter().rposition(|&l| l != Level::One).unwrap_or(lo);
    if levels.iter().all(|&l| l == Level::Zero) {
        return (Threshold::Finite(0), Threshold::Infinite);
    }
    let last = degrees.len() - 1;
    let lone_mixed = lo == hi && levels[lo] == Level::Mixed;
    let upper_side = lone_mixed && slope_up(degrees[lo]);

    let d_lower = if lo == 0 && (levels[lo] == Level::Zero || upper_side) {
        Threshold::Finite(0)
    } else {
        Threshold::Finite(degrees[lo])
    };
    let d_upper = if hi == last && (levels[hi] == Level::Zero || (lone_mixed && !upper_side)) {
        Threshold::Infinite
    } else {
        Threshold::Finite(degrees[hi])
    };
    (d_lower, d_upper)
}

/// Whether `mu` (over ascending degrees) is a double-threshold strategy:
/// ones, then one free entry, zeros, one free entry, then ones.
pub fn is_double_threshold(mu: &[f64]) -> bool {
    // states: 0 = leading ones, 1 = zeros block, 2 = trailing ones
    const LEAD: u8 = 1;
    const MID: u8 = 2;
    const TAIL: u8 = 4;
    let closure = |s: u8| {
        let mut s = s;
        if s & LEAD != 0 {
            s |= MID;
        }
        if s & MID != 0 {
            s |= TAIL;
        }
        s
    };
    let mut states = closure(LEAD);
    for &m in mu {
        let l = level(m);
        let mut next = 0;
        if states & LEAD != 0 {
            if l == Level::One {
                next |= LEAD;
            }
            next |= MID;
        }
        if states & MID != 0 {
            if l == Level::Zero {
                next |= MID;
            }
            next |= TAIL;
        }
        if states & TAIL != 0 && l == Level::One {
            next |= TAIL;
        }
        states = closure(next);
        if states == 0 {
            return false;
        }
    }
    states != 0
}

/// `alpha(mu) = Σ f~(d) mu(d)`.
pub fn informational_access(mu: &MeanFieldStrategy, f_tilde: &EdgePerspectiveDistribution) -> f64 {
    mu.degrees.iter().zip(&mu.mu).map(|(&d, &m)| f_tilde.prob(d) * m).sum()
}

/// `beta(mu) = Σ f(d) mu(d)`.
pub fn early_fraction(mu: &MeanFieldStrategy, f: &DegreeDistribution) -> f64 {
    mu.degrees.iter().zip(&mu.mu).map(|(&d, &m)| f.prob(d) * m).sum()
}

/// `alpha / beta`, or `None` when nobody adopts early.
pub fn informational_efficiency(mu: &MeanFieldStrategy, f: &DegreeDistribution) -> Option<f64> {
    let beta = early_fraction(mu, f);
    if beta > 0.0 {
        Some(informational_access(mu, &edge_perspective(f)) / beta)
    } else {
        None
    }
}

/// CSV `degree,mu,delta_payoff` preceded by a `#` block with
/// `alpha_star,d_L,d_U`.
pub fn equilibrium_csv(eq: &MeanFieldEquilibrium, params: &GameParams, policy: &PricingPolicy) -> String {
    let mut out = String::from("# alpha_star,d_L,d_U\n");
    out.push_str(&format!(
        "# {},{},{}\n",
        format::real(eq.alpha_star),
        eq.d_lower,
        eq.d_upper
    ));
    out.push_str(&format::row(&["degree", "mu", "delta_payoff"]));
    for (&d, &m) in eq.strategy.degrees.iter().zip(&eq.strategy.mu) {
        let dp = delta_payoff(params, policy, eq.alpha_star, d);
        out.push_str(&format::row(&[d.to_string(), format::real(m), format::real(dp)]));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn threshold_shapes() {
        let up = |_| false;
        assert!(is_double_threshold(&[1.0, 0.0, 0.0, 1.0]));
        assert!(is_double_threshold(&[0.3, 0.0, 0.7]));
        assert!(is_double_threshold(&[1.0, 1.0, 0.5, 1.0]));
        assert!(!is_double_threshold(&[0.0, 1.0, 0.0, 1.0, 0.0]));
        assert!(!is_double_threshold(&[1.0, 0.0, 1.0, 0.0, 1.0]));
        assert_eq!(
            thresholds_from(&[1, 2, 3], &[1.0, 0.0, 0.0], up),
            (Threshold::Finite(2), Threshold::Infinite)
        );
        assert_eq!(
            thresholds_from(&[1, 2, 3], &[0.0, 0.0, 1.0], up),
            (Threshold::Finite(0), Threshold::Finite(2))
        );
        assert_eq!(
            thresholds_from(&[1, 2, 3], &[1.0, 0.4, 1.0], up),
            (Threshold::Finite(2), Threshold::Finite(2))
        );
        assert_eq!(thresholds_from(&[4], &[1.0], up), (Threshold::Infinite, Threshold::Infinite));
        assert_eq!(thresholds_from(&[4], &[0.0], up), (Threshold::Finite(0), Threshold::Infinite));
        assert_eq!(thresholds_from(&[4], &[0.5], |_| true), (Threshold::Finite(0), Threshold::Finite(4)));
        assert_eq!(thresholds_from(&[4], &[0.5], up), (Threshold::Finite(4), Threshold::Infinite));
    }

    #[test]
    fn non_convergence_reports_bracket() {
        let params = GameParams::default();
        let policy = PricingPolicy::new(0.0, 0.0, 25.0).unwrap();
        let f = crate::degree_dist::make_regular(2).unwrap();
        let cfg = SolverConfig { max_iter: 3, ..SolverConfig::default() };
        match solve_equilibrium_with(&params, &policy, &f, &cfg) {
            Err(Error::NotConverged { iterations, lo, hi }) => {
                assert_eq!(iterations, 3);
                assert!(lo <= 0.9037 && 0.9038 <= hi);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }
}
