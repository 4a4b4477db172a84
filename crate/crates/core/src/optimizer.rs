//! Optimal policies within the two-price class, the referral class and the
//! unrestricted space.
//!
//! Two-price and unrestricted optima sit at `(A_bar, A1H, 0)` and reduce to a
//! pattern search (see [`crate::patterns`]). Any policy earns at most
//! `A_bar beta + A1H gamma_H` for the pattern it induces, since each early
//! adopter's price is bounded by `A_bar` plus its referral income and no late
//! adopter pays more than `A1H`. A vanishing referral payment reaches every
//! double-threshold pattern at that bound, so the unrestricted optimum is the
//! best double-threshold pattern for the bound functional.
//!
//! Referral policies `(P, P, eta)` are searched by informational access
//! rather than by `eta`. For a price `P` and a target `alpha`, degree `d`
//! adopts once `eta >= t_d = -c_d / b_d`, with `c_d` the referral-free
//! payoff difference and `b_d = p R(d, alpha)`. Sorting the `t_d` and filling
//! `f~` mass up to `alpha` yields the smallest sustaining `eta` and the
//! adoption pattern, including triple-threshold patterns under a cap.

use rayon::prelude::*;

use crate::adoption_game::{assemble, expected_referrals, informed_prob, GameParams, MeanFieldEquilibrium, PricingPolicy, Threshold};
use crate::degree_dist::{edge_perspective, DegreeDistribution};
use crate::error::Result;
use crate::numeric::{golden_max, linspace};
use crate::patterns::{best_double_threshold, best_lower_threshold, Pattern};
pub use crate::pricing::PolicyClass;
use crate::pricing::{limit_profit, strategy_profit};

/// Profit gap treated as a tie.
const TIE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct TraceEntry {
    pub policy: PricingPolicy,
    pub d_lower: Threshold,
    pub d_upper: Threshold,
    pub mixing_degree: Option<u32>,
    pub mixing_weight: f64,
    pub profit: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationResult {
    pub class: PolicyClass,
    pub best_policy: PricingPolicy,
    pub best_profit: f64,
    pub equilibrium: MeanFieldEquilibrium,
    pub search_trace: Vec<TraceEntry>,
    pub diagnostic: Option<String>,
}

impl OptimizationResult {
    /// CSV `P0,P1,eta,d_L,d_U,mixing_degree,mixing_weight,profit`.
    pub fn trace_csv(&self) -> String {
        use crate::format::{real, row};
        let mut out = row(&["P0", "P1", "eta", "d_L", "d_U", "mixing_degree", "mixing_weight", "profit"]);
        for t in &self.search_trace {
            out.push_str(&row(&[
                real(t.policy.p0()),
                real(t.policy.p1()),
                real(t.policy.eta()),
                t.d_lower.to_string(),
                t.d_upper.to_string(),
                t.mixing_degree.map_or_else(|| "none".to_string(), |d| d.to_string()),
                real(t.mixing_weight),
                real(t.profit),
            ]));
        }
        out
    }
}

/// Resolution of the referral search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferralSearch {
    /// Prices on `[0, A1H]`, endpoints included.
    pub price_grid: usize,
    /// Uniformly spaced access levels in `(0, 1)`.
    pub alpha_grid: usize,
    /// Extra log-spaced access levels in `[1e-4, 0.1]`.
    pub alpha_log_grid: usize,
    /// Grid cells refined by coordinate-wise golden-section search.
    pub refine_starts: usize,
    pub refine_rounds: usize,
    pub price_tol: f64,
    pub alpha_tol: f64,
}

impl Default for ReferralSearch {
    fn default() -> Self {
        Self {
            price_grid: 400,
            alpha_grid: 256,
            alpha_log_grid: 64,
            refine_starts: 6,
            refine_rounds: 4,
            price_tol: 1e-6,
            alpha_tol: 1e-10,
        }
    }
}

fn surplus_policy(params: &GameParams, informed: bool) -> PricingPolicy {
    PricingPolicy::two_price(params.a_bar(), params.a1h())
        .expect("A1H is positive")
        .with_informed(informed)
}

fn late_weight(params: &GameParams, informed: bool) -> f64 {
    if informed {
        params.a1h()
    } else {
        params.p() * params.a1h()
    }
}

fn pattern_trace(params: &GameParams, policy: &PricingPolicy, f: &DegreeDistribution, patterns: &[Pattern]) -> Vec<TraceEntry> {
    patterns
        .iter()
        .map(|pat| {
            let eq = assemble(params, policy, f, pat.mu.clone(), pat.alpha);
            let profit = strategy_profit(params, policy, f, &pat.mu, pat.alpha).total;
            TraceEntry {
                policy: *policy,
                d_lower: eq.d_lower,
                d_upper: eq.d_upper,
                mixing_degree: pat.mixing_index.map(|i| f.degrees()[i]),
                mixing_weight: pat.weight,
                profit,
            }
        })
        .collect()
}

fn pattern_result(
    class: PolicyClass,
    params: &GameParams,
    f: &DegreeDistribution,
    informed: bool,
    best: Pattern,
    segments: &[Pattern],
) -> OptimizationResult {
    let policy = surplus_policy(params, informed);
    let breakdown = strategy_profit(params, &policy, f, &best.mu, best.alpha);
    let equilibrium = assemble(params, &policy, f, best.mu, best.alpha);
    OptimizationResult {
        class,
        best_policy: policy,
        best_profit: breakdown.total,
        equilibrium,
        search_trace: pattern_trace(params, &policy, f, segments),
        diagnostic: None,
    }
}

/// Best two-price policy. The prices are fixed at `(A_bar, A1H)` and the
/// lower-threshold pattern is optimized.
pub fn optimize_two_price(params: &GameParams, f: &DegreeDistribution, informed: bool) -> OptimizationResult {
    let (best, segments) = best_lower_threshold(f, params.a_bar(), late_weight(params, informed));
    pattern_result(PolicyClass::TwoPrice, params, f, informed, best, &segments)
}

/// Best unrestricted policy, reported as its limit point `(A_bar, A1H, 0)`
/// approached with a vanishing referral payment.
pub fn optimize_full(params: &GameParams, f: &DegreeDistribution, informed: bool) -> OptimizationResult {
    let (best, per_lower) = best_double_threshold(f, params.a_bar(), late_weight(params, informed));
    pattern_result(PolicyClass::Full, params, f, informed, best, &per_lower)
}

/// Best referral policy `(P, P, eta)` with linear referrals.
pub fn optimize_referral(
    params: &GameParams,
    f: &DegreeDistribution,
    informed: bool,
    search: &ReferralSearch,
) -> Result<OptimizationResult> {
    referral_search(params, f, None, informed, search)
}

/// Best referral policy when at most `cap` referrals are paid per adopter.
pub fn optimize_capped_referral(
    params: &GameParams,
    f: &DegreeDistribution,
    cap: u32,
    informed: bool,
    search: &ReferralSearch,
) -> Result<OptimizationResult> {
    PricingPolicy::referral(0.0, 0.0)?.with_cap(Some(cap))?;
    referral_search(params, f, Some(cap), informed, search)
}

struct Profile {
    alpha: f64,
    s: Vec<f64>,
    r: Vec<f64>,
    fs_total: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Candidate {
    alpha: f64,
    price: f64,
    eta: f64,
    mix: usize,
    weight: f64,
    profit: f64,
}

impl Candidate {
    fn beats(&self, other: &Candidate) -> bool {
        if self.profit > other.profit + TIE_TOL {
            return true;
        }
        if self.profit < other.profit - TIE_TOL {
            return false;
        }
        // smaller eta, then larger price
        self.eta < other.eta || (self.eta == other.eta && self.price > other.price)
    }
}

fn pick(a: Option<Candidate>, b: Option<Candidate>) -> Option<Candidate> {
    match (a, b) {
        (Some(x), Some(y)) => Some(if y.beats(&x) { y } else { x }),
        (x, None) => x,
        (None, y) => y,
    }
}

struct ReferralProblem<'a> {
    f: &'a DegreeDistribution,
    fv: Vec<f64>,
    ft: Vec<f64>,
    cap: Option<u32>,
    a_bar: f64,
    a1h: f64,
    p: f64,
    scale: f64,
}

impl ReferralProblem<'_> {
    fn profile(&self, alpha: f64) -> Profile {
        let degrees = self.f.degrees();
        let s: Vec<f64> = degrees.iter().map(|&d| informed_prob(alpha, d)).collect();
        let r: Vec<f64> = degrees.iter().map(|&d| expected_referrals(self.cap, alpha, d)).collect();
        let fs_total = self.fv.iter().zip(&s).map(|(a, b)| a * b).sum();
        Profile { alpha, s, r, fs_total }
    }

    /// Cheapest referral payment sustaining `alpha` at `price`, and the
    /// resulting profit. `order` is scratch space.
    fn evaluate(&self, prof: &Profile, price: f64, t: &mut Vec<f64>, order: &mut Vec<usize>) -> Option<Candidate> {
        let k = self.fv.len();
        t.clear();
        for i in 0..k {
            let c = self.a_bar - price - self.p * (self.a1h - price) * prof.s[i];
            let b = self.p * prof.r[i];
            t.push(if b > 0.0 {
                -c / b
            } else if c >= 0.0 {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            });
        }
        order.clear();
        order.extend(0..k);
        order.sort_unstable_by(|&a, &b| t[a].total_cmp(&t[b]).then(a.cmp(&b)));

        let alpha = prof.alpha;
        let mut cum = 0.0;
        let mut pos = None;
        for (j, &i) in order.iter().enumerate() {
            if self.ft[i] > 0.0 && cum + self.ft[i] >= alpha - 1e-15 {
                pos = Some(j);
                break;
            }
            cum += self.ft[i];
        }
        let pos = pos?;
        let mix = order[pos];
        let weight = ((alpha - cum) / self.ft[mix]).clamp(0.0, 1.0);
        let mut eta = t[mix];
        if !eta.is_finite() {
            return None;
        }
        if eta < 0.0 {
            // at eta = 0 everything up to `mix` adopts strictly; consistent only
            // if `mix` is fully in and the next degree does not adopt
            let next_ok = order.get(pos + 1).map_or(true, |&i| t[i] >= 0.0 || self.ft[i] == 0.0);
            if weight < 1.0 - 1e-12 || !next_ok {
                return None;
            }
            eta = 0.0;
        }
        let (mut beta, mut fs_in, mut phi) = (0.0, 0.0, 0.0);
        for &i in &order[..pos] {
            beta += self.fv[i];
            fs_in += self.fv[i] * prof.s[i];
            phi += self.fv[i] * prof.r[i];
        }
        beta += self.fv[mix] * weight;
        fs_in += self.fv[mix] * weight * prof.s[mix];
        phi += self.fv[mix] * weight * prof.r[mix];
        let gamma = (prof.fs_total - fs_in).max(0.0);
        let profit = price * beta + self.scale * (price * gamma - eta * phi);
        Some(Candidate { alpha, price, eta, mix, weight, profit })
    }

    fn strategy(&self, prof: &Profile, cand: &Candidate) -> Vec<f64> {
        let mut t = Vec::new();
        let mut order = Vec::new();
        self.evaluate(prof, cand.price, &mut t, &mut order);
        let mut mu = vec![0.0; self.fv.len()];
        for &i in &order {
            if i == cand.mix {
                mu[i] = cand.weight;
                break;
            }
            mu[i] = 1.0;
        }
        mu
    }
}

fn alpha_grid(search: &ReferralSearch, ft: &[f64]) -> Vec<f64> {
    let n = search.alpha_grid.max(1);
    let mut grid: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) / n as f64).collect();
    if search.alpha_log_grid > 1 {
        let (a, b) = (1e-4_f64.ln(), 0.1_f64.ln());
        grid.extend(linspace(a, b, search.alpha_log_grid).into_iter().map(f64::exp));
    }
    // pattern end points of small supports, where profit often jumps
    if ft.len() <= 12 {
        let mut up = 0.0;
        let mut down = 0.0;
        for i in 0..ft.len() {
            up += ft[i];
            down += ft[ft.len() - 1 - i];
            grid.push(up);
            grid.push(down);
        }
    }
    grid.retain(|&a| a > 0.0 && a < 1.0);
    grid.sort_by(|a, b| a.total_cmp(b));
    grid.dedup();
    grid
}

fn referral_search(
    params: &GameParams,
    f: &DegreeDistribution,
    cap: Option<u32>,
    informed: bool,
    search: &ReferralSearch,
) -> Result<OptimizationResult> {
    let problem = ReferralProblem {
        f,
        fv: f.probs().to_vec(),
        ft: edge_perspective(f).probs().to_vec(),
        cap,
        a_bar: params.a_bar(),
        a1h: params.a1h(),
        p: params.p(),
        scale: if informed { 1.0 } else { params.p() },
    };
    let alphas = alpha_grid(search, &problem.ft);
    let prices = linspace(0.0, params.a1h(), search.price_grid.max(2));

    // grid[i][j]: alpha i, price j
    let grid: Vec<Vec<Option<Candidate>>> = alphas
        .par_iter()
        .map_init(
            || (Vec::new(), Vec::new()),
            |(t, order), &alpha| {
                let prof = problem.profile(alpha);
                prices.iter().map(|&price| problem.evaluate(&prof, price, t, order)).collect()
            },
        )
        .collect();

    let mut cells: Vec<(usize, usize, Candidate)> = Vec::new();
    for (i, row) in grid.iter().enumerate() {
        for (j, c) in row.iter().enumerate() {
            if let Some(c) = c {
                cells.push((i, j, *c));
            }
        }
    }
    cells.sort_by(|a, b| b.2.profit.total_cmp(&a.2.profit).then(a.0.cmp(&b.0)).then(b.1.cmp(&a.1)));
    let mut starts: Vec<(usize, usize, Candidate)> = Vec::new();
    for cell in &cells {
        if starts.len() >= search.refine_starts {
            break;
        }
        if starts.iter().all(|s| s.0.abs_diff(cell.0) > 1 || s.1.abs_diff(cell.1) > 1) {
            starts.push(*cell);
        }
    }

    let refined: Vec<Candidate> = starts
        .par_iter()
        .map(|&(i, j, start)| refine(&problem, &alphas, &prices, i, j, start, search))
        .collect();

    let mut best = None;
    for c in cells.iter().map(|c| c.2).chain(refined.iter().copied()) {
        best = pick(best, Some(c));
    }

    // one trace row per grid price: the best access level there
    let mut trace = Vec::with_capacity(prices.len() + refined.len());
    let mut trace_rows: Vec<(Candidate, usize)> = Vec::new();
    for j in 0..prices.len() {
        let mut row_best: Option<(Candidate, usize)> = None;
        for (i, row) in grid.iter().enumerate() {
            if let Some(c) = row[j] {
                if row_best.map_or(true, |(b, _)| c.beats(&b)) {
                    row_best = Some((c, i));
                }
            }
        }
        if let Some(rb) = row_best {
            trace_rows.push(rb);
        }
    }
    let describe = |c: &Candidate| -> Result<TraceEntry> {
        let policy = PricingPolicy::referral(c.price, c.eta)?.with_cap(cap)?.with_informed(informed);
        let prof = problem.profile(c.alpha);
        let mu = problem.strategy(&prof, c);
        let eq = assemble(params, &policy, f, mu, c.alpha);
        Ok(TraceEntry {
            policy,
            d_lower: eq.d_lower,
            d_upper: eq.d_upper,
            mixing_degree: Some(f.degrees()[c.mix]),
            mixing_weight: c.weight,
            profit: c.profit,
        })
    };
    for (c, _) in &trace_rows {
        trace.push(describe(c)?);
    }
    for c in &refined {
        trace.push(describe(c)?);
    }

    let Some(best) = best else {
        let policy = PricingPolicy::referral(0.0, 0.0)?.with_cap(cap)?.with_informed(informed);
        let lp = limit_profit(params, &policy, f, PolicyClass::Referral)?;
        return Ok(OptimizationResult {
            class: PolicyClass::Referral,
            best_policy: policy,
            best_profit: lp.value,
            equilibrium: lp.equilibrium,
            search_trace: trace,
            diagnostic: Some("no sustainable referral pattern on the search grid".into()),
        });
    };

    let policy = PricingPolicy::referral(best.price, best.eta)?.with_cap(cap)?.with_informed(informed);
    let lp = limit_profit(params, &policy, f, PolicyClass::Referral)?;
    if lp.value >= best.profit - 1e-9 {
        Ok(OptimizationResult {
            class: PolicyClass::Referral,
            best_policy: policy,
            best_profit: lp.value,
            equilibrium: lp.equilibrium,
            search_trace: trace,
            diagnostic: None,
        })
    } else {
        let prof = problem.profile(best.alpha);
        let mu = problem.strategy(&prof, &best);
        Ok(OptimizationResult {
            class: PolicyClass::Referral,
            best_policy: policy,
            best_profit: best.profit,
            equilibrium: assemble(params, &policy, f, mu, best.alpha),
            search_trace: trace,
            diagnostic: Some(format!(
                "limit profit at the reported policy is {}, below the search value {}",
                lp.value, best.profit
            )),
        })
    }
}

fn refine(
    problem: &ReferralProblem<'_>,
    alphas: &[f64],
    prices: &[f64],
    i: usize,
    j: usize,
    start: Candidate,
    search: &ReferralSearch,
) -> Candidate {
    let a_lo = if i > 0 { alphas[i - 1] } else { alphas[0] * 0.5 };
    let a_hi = if i + 1 < alphas.len() { alphas[i + 1] } else { 0.5 * (alphas[i] + 1.0) };
    let p_lo = if j > 0 { prices[j - 1] } else { prices[0] };
    let p_hi = if j + 1 < prices.len() { prices[j + 1] } else { prices[j] };
    let mut best = start;
    let (mut t, mut order) = (Vec::new(), Vec::new());
    for _ in 0..search.refine_rounds {
        let price = best.price;
        let mut found = None;
        golden_max(
            |alpha| {
                let prof = problem.profile(alpha);
                match problem.evaluate(&prof, price, &mut t, &mut order) {
                    Some(c) => {
                        found = pick(found, Some(c));
                        c.profit
                    }
                    None => f64::NEG_INFINITY,
                }
            },
            a_lo,
            a_hi,
            search.alpha_tol,
        );
        best = pick(Some(best), found).unwrap_or(best);

        let prof = problem.profile(best.alpha);
        let mut found = None;
        golden_max(
            |price| match problem.evaluate(&prof, price, &mut t, &mut order) {
                Some(c) => {
                    found = pick(found, Some(c));
                    c.profit
                }
                None => f64::NEG_INFINITY,
            },
            p_lo,
            p_hi,
            search.price_tol,
        );
        best = pick(Some(best), found).unwrap_or(best);
    }
    best
}
