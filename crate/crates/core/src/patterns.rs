//! Best adoption patterns at the surplus-extraction policy `(A_bar, A1H, 0)`.
//!
//! At that policy every degree is indifferent, so any strategy is a weak best
//! response and the profit reduces to `A_bar * beta + c * gamma_H` with
//! `c = A1H` (informed) or `p * A1H` (uninformed). The searches below maximize
//! that functional over lower-threshold or double-threshold patterns with at
//! most one mixing degree. Along each segment between two neighbouring pure
//! patterns the functional is concave in the mixing weight, so a
//! golden-section search per segment finds its maximum.

use rayon::prelude::*;

use crate::degree_dist::{edge_perspective, DegreeDistribution};
use crate::numeric::golden_max;

/// Tolerance on the mixing weight.
pub const WEIGHT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct Pattern {
    pub mu: Vec<f64>,
    pub alpha: f64,
    pub value: f64,
    /// Index into the support of the mixing degree, if any.
    pub mixing_index: Option<usize>,
    pub weight: f64,
}

struct Objective {
    degrees: Vec<u32>,
    f: Vec<f64>,
    ft: Vec<f64>,
    // prefix sums of f and f~
    pre_f: Vec<f64>,
    pre_ft: Vec<f64>,
    a_bar: f64,
    late: f64,
}

impl Objective {
    fn new(f: &DegreeDistribution, a_bar: f64, late: f64) -> Self {
        let ft = edge_perspective(f).probs().to_vec();
        let fv = f.probs().to_vec();
        let mut pre_f = vec![0.0];
        let mut pre_ft = vec![0.0];
        for i in 0..fv.len() {
            pre_f.push(pre_f[i] + fv[i]);
            pre_ft.push(pre_ft[i] + ft[i]);
        }
        Self { degrees: f.degrees().to_vec(), f: fv, ft, pre_f, pre_ft, a_bar, late }
    }

    fn k(&self) -> usize {
        self.degrees.len()
    }

    /// Adopters are indices `< a` and `>= e`; index `mix` in `[a, e)` plays `w`.
    fn eval(&self, a: usize, e: usize, mix: Option<usize>, w: f64) -> (f64, f64) {
        let k = self.k();
        let mut alpha = self.pre_ft[a] + (self.pre_ft[k] - self.pre_ft[e]);
        let mut beta = self.pre_f[a] + (self.pre_f[k] - self.pre_f[e]);
        if let Some(m) = mix {
            alpha += self.ft[m] * w;
            beta += self.f[m] * w;
        }
        let alpha = alpha.clamp(0.0, 1.0);
        let mut gamma = 0.0;
        for i in a..e {
            let stay = if Some(i) == mix { 1.0 - w } else { 1.0 };
            gamma += self.f[i] * stay * (1.0 - (1.0 - alpha).powi(self.degrees[i] as i32));
        }
        (alpha, self.a_bar * beta + self.late * gamma)
    }

    fn segment(&self, a: usize, e: usize, mix: usize) -> Pattern {
        let (w, value) = golden_max(|w| self.eval(a, e, Some(mix), w).1, 0.0, 1.0, WEIGHT_TOL);
        let (alpha, _) = self.eval(a, e, Some(mix), w);
        let k = self.k();
        let mut mu = vec![0.0; k];
        for (i, m) in mu.iter_mut().enumerate() {
            if i < a || i >= e {
                *m = 1.0;
            }
        }
        mu[mix] = w;
        let mixing_index = (w > 0.0 && w < 1.0).then_some(mix);
        Pattern { mu, alpha, value, mixing_index, weight: w }
    }
}

fn better(a: &Pattern, b: &Pattern) -> bool {
    // prefer higher value, then less early adoption
    a.value > b.value + 1e-14 || ((a.value - b.value).abs() <= 1e-14 && a.alpha < b.alpha)
}

fn best_of(items: impl Iterator<Item = Pattern>) -> Option<Pattern> {
    items.fold(None, |acc: Option<Pattern>, p| match acc {
        Some(b) if !better(&p, &b) => Some(b),
        _ => Some(p),
    })
}

/// Best lower-threshold pattern: degrees below `d_L` adopt, `d_L` mixes.
///
/// Also returns the best pattern of every segment, in ascending order of
/// the mixing degree.
pub fn best_lower_threshold(f: &DegreeDistribution, a_bar: f64, late: f64) -> (Pattern, Vec<Pattern>) {
    let obj = Objective::new(f, a_bar, late);
    let k = obj.k();
    let per_segment: Vec<Pattern> = (0..k).into_par_iter().map(|a| obj.segment(a, k, a)).collect();
    let best = best_of(per_segment.iter().cloned()).expect("support is nonempty");
    (best, per_segment)
}

/// Best double-threshold pattern with at most one mixing degree.
///
/// Returns the best pattern overall and the best per lower-threshold index.
pub fn best_double_threshold(f: &DegreeDistribution, a_bar: f64, late: f64) -> (Pattern, Vec<Pattern>) {
    let obj = Objective::new(f, a_bar, late);
    let k = obj.k();
    let per_lower: Vec<Pattern> = (0..k)
        .into_par_iter()
        .map(|a| {
            let segs = (a + 1..=k).flat_map(|e| {
                let lower = obj.segment(a, e, a);
                let upper = (e - 1 > a).then(|| obj.segment(a, e, e - 1));
                std::iter::once(lower).chain(upper)
            });
            best_of(segs).expect("at least one segment")
        })
        .collect();
    let best = best_of(per_lower.iter().cloned()).expect("support is nonempty");
    (best, per_lower)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degree_dist::make_regular;

    #[test]
    fn regular_one_matches_closed_form() {
        // 6a + 20(1-a)a peaks at a = 0.65 with value 8.45
        let f = make_regular(1).unwrap();
        let (p, _) = best_lower_threshold(&f, 6.0, 20.0);
        assert!((p.alpha - 0.65).abs() < 1e-8);
        assert!((p.value - 8.45).abs() < 1e-12);
        let (q, _) = best_double_threshold(&f, 6.0, 20.0);
        assert!((q.value - p.value).abs() < 1e-12);
    }
}
