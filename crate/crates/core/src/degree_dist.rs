//! Degree distributions over a finite support and their edge-perspective
//! transform.
//!
//! A [`DegreeDistribution`] stores its support in ascending order together
//! with the probabilities. Zero-mass entries are allowed and kept, which lets
//! a distribution carry degrees that no agent actually has. The
//! [`EdgePerspectiveDistribution`] produced by [`edge_perspective`] is always
//! aligned index by index with the distribution it came from.

use crate::error::{Error, Result};
use crate::format;

/// Default truncation point for the Jackson–Rogers family.
pub const DEFAULT_D_MAX: u32 = 200;

/// Tolerance for the sum-to-one check on user supplied pmfs.
const INPUT_SUM_TOL: f64 = 1e-9;

/// Tolerance of the pointwise CDF comparison in [`fosd_dominates`].
pub const FOSD_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct DegreeDistribution {
    degrees: Vec<u32>,
    probs: Vec<f64>,
    d_max: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgePerspectiveDistribution {
    degrees: Vec<u32>,
    probs: Vec<f64>,
}

impl DegreeDistribution {
    /// Builds a distribution from `(degree, probability)` pairs.
    ///
    /// Pairs may come in any order. The probabilities must be nonnegative and
    /// sum to one within `1e-9`; they are then renormalized exactly.
    pub fn from_pmf(pairs: &[(u32, f64)], d_max: u32) -> Result<Self> {
        let mut pairs = pairs.to_vec();
        pairs.sort_by_key(|&(d, _)| d);
        let total: f64 = pairs.iter().map(|&(_, p)| p).sum();
        if (total - 1.0).abs() > INPUT_SUM_TOL {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {total}, expected 1"
            )));
        }
        Self::from_weights(&pairs, d_max)
    }

    /// Builds a distribution from nonnegative weights, normalizing them.
    pub fn from_weights(pairs: &[(u32, f64)], d_max: u32) -> Result<Self> {
        let mut pairs = pairs.to_vec();
        pairs.sort_by_key(|&(d, _)| d);
        if pairs.is_empty() {
            return Err(Error::InvalidDistribution("empty support".into()));
        }
        for w in pairs.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::InvalidDistribution(format!("degree {} listed twice", w[0].0)));
            }
        }
        for &(d, p) in &pairs {
            if d == 0 {
                return Err(Error::InvalidDistribution(
                    "degree 0 is not allowed; agents without neighbors are excluded".into(),
                ));
            }
            if d > d_max {
                return Err(Error::InvalidDistribution(format!(
                    "degree {d} exceeds d_max = {d_max}"
                )));
            }
            if !(p >= 0.0) || !p.is_finite() {
                return Err(Error::InvalidDistribution(format!(
                    "probability of degree {d} is {p}"
                )));
            }
        }
        let total: f64 = pairs.iter().map(|&(_, p)| p).sum();
        if !(total > 0.0) {
            return Err(Error::InvalidDistribution("total mass is zero".into()));
        }
        Ok(Self {
            degrees: pairs.iter().map(|&(d, _)| d).collect(),
            probs: pairs.iter().map(|&(_, p)| p / total).collect(),
            d_max,
        })
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn d_max(&self) -> u32 {
        self.d_max
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    /// Probability of degree `d`, zero outside the support.
    pub fn prob(&self, d: u32) -> f64 {
        self.degrees.binary_search(&d).map(|i| self.probs[i]).unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        self.degrees.iter().copied().zip(self.probs.iter().copied())
    }

    /// Mean degree, summed in ascending degree order.
    pub fn mean(&self) -> f64 {
        self.iter().map(|(d, p)| d as f64 * p).sum()
    }

    /// Largest degree carrying positive mass.
    pub fn max_degree(&self) -> u32 {
        self.iter().filter(|&(_, p)| p > 0.0).map(|(d, _)| d).max().unwrap_or(0)
    }

    /// Adds zero-mass entries for degrees not already in the support.
    pub fn with_zero_mass(&self, extra: &[u32]) -> Result<Self> {
        let mut pairs: Vec<(u32, f64)> = self.iter().collect();
        for &d in extra {
            if self.degrees.binary_search(&d).is_err() && !pairs.iter().any(|&(e, _)| e == d) {
                pairs.push((d, 0.0));
            }
        }
        Self::from_weights(&pairs, self.d_max.max(extra.iter().copied().max().unwrap_or(0)))
    }

    /// CSV with header `degree,probability`, ascending degrees.
    pub fn to_csv(&self) -> String {
        let mut out = format::row(&["degree", "probability"]);
        for (d, p) in self.iter() {
            out.push_str(&format::row(&[d.to_string(), format::real(p)]));
        }
        out
    }

    /// Parses the format written by [`to_csv`](Self::to_csv). Lines starting
    /// with `#` are skipped.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        let mut header_seen = false;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if !header_seen {
                header_seen = true;
                if line.replace(' ', "") == "degree,probability" {
                    continue;
                }
            }
            let bad = || Error::InvalidDistribution(format!("line {}: cannot parse `{line}`", lineno + 1));
            let (d, p) = line.split_once(',').ok_or_else(bad)?;
            let d: u32 = d.trim().parse().map_err(|_| bad())?;
            let p: f64 = p.trim().parse().map_err(|_| bad())?;
            pairs.push((d, p));
        }
        let d_max = pairs.iter().map(|&(d, _)| d).max().unwrap_or(1);
        Self::from_pmf(&pairs, d_max)
    }
}

impl EdgePerspectiveDistribution {
    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, d: u32) -> f64 {
        self.degrees.binary_search(&d).map(|i| self.probs[i]).unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        self.degrees.iter().copied().zip(self.probs.iter().copied())
    }

    /// Cumulative probability of degrees `<= x`.
    pub fn cdf(&self, x: u32) -> f64 {
        self.iter().take_while(|&(d, _)| d <= x).map(|(_, p)| p).sum()
    }
}

/// Point mass at degree `d`.
pub fn make_regular(d: u32) -> Result<DegreeDistribution> {
    if d == 0 {
        return Err(Error::param("d", "degree must be at least 1"));
    }
    DegreeDistribution::from_pmf(&[(d, 1.0)], d)
}

/// Mass `q` at `d_u` and `1 - q` at `d_l`.
pub fn make_two_degree(d_l: u32, d_u: u32, q: f64) -> Result<DegreeDistribution> {
    if d_l == 0 {
        return Err(Error::param("d_l", "degree must be at least 1"));
    }
    if d_l > d_u {
        return Err(Error::param("d_l", format!("d_l = {d_l} exceeds d_u = {d_u}")));
    }
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::param("q", format!("{q} is not a probability")));
    }
    if d_l == d_u {
        return make_regular(d_l);
    }
    DegreeDistribution::from_pmf(&[(d_l, 1.0 - q), (d_u, q)], d_u)
}

/// Analytic Jackson–Rogers CDF `F(d) = 1 - (rm/(d+rm))^(1+r)`.
///
/// `r = +inf` gives the exponential limit `1 - exp(-d/m)`.
pub fn jackson_rogers_cdf(m: f64, r: f64, d: f64) -> f64 {
    1.0 - jackson_rogers_tail(m, r, d)
}

fn jackson_rogers_tail(m: f64, r: f64, d: f64) -> f64 {
    if r.is_infinite() {
        (-d / m).exp()
    } else {
        (r * m / (d + r * m)).powf(1.0 + r)
    }
}

/// Jackson–Rogers degrees on `1..=d_max`, renormalized over that support.
///
/// `m` is the mean of the untruncated distribution and `r` the ratio of
/// random to network-based meetings. `r = f64::INFINITY` is accepted and
/// gives the exponential limit.
pub fn make_jackson_rogers(m: f64, r: f64, d_max: u32) -> Result<DegreeDistribution> {
    if !(m > 0.0) || !m.is_finite() {
        return Err(Error::param("m", format!("must be positive, got {m}")));
    }
    if !(r > 0.0) {
        return Err(Error::param("r", format!("must be positive, got {r}")));
    }
    if d_max == 0 {
        return Err(Error::param("d_max", "must be at least 1"));
    }
    // differences of tails avoid cancellation in F(d) - F(d-1)
    let pairs: Vec<(u32, f64)> = (1..=d_max)
        .map(|d| {
            let hi = jackson_rogers_tail(m, r, (d - 1) as f64);
            let lo = jackson_rogers_tail(m, r, d as f64);
            (d, (hi - lo).max(0.0))
        })
        .collect();
    DegreeDistribution::from_weights(&pairs, d_max)
}

/// Degree distribution of a random neighbor, `f~(d) = d f(d) / mean`.
pub fn edge_perspective(f: &DegreeDistribution) -> EdgePerspectiveDistribution {
    let mean = f.mean();
    EdgePerspectiveDistribution {
        degrees: f.degrees.clone(),
        probs: f.iter().map(|(d, p)| d as f64 * p / mean).collect(),
    }
}

/// Mean and standard deviation of the degree.
pub fn moments(f: &DegreeDistribution) -> (f64, f64) {
    let mean = f.mean();
    let var: f64 = f.iter().map(|(d, p)| p * (d as f64 - mean).powi(2)).sum();
    (mean, var.max(0.0).sqrt())
}

/// True when `g` first-order stochastically dominates `h`, i.e. the CDF of
/// `g` lies weakly below that of `h` on the union of supports.
pub fn fosd_dominates(g: &EdgePerspectiveDistribution, h: &EdgePerspectiveDistribution) -> bool {
    let mut points: Vec<u32> = g.degrees.iter().chain(h.degrees.iter()).copied().collect();
    points.sort_unstable();
    points.dedup();
    let (mut cg, mut ch) = (0.0, 0.0);
    let (mut i, mut j) = (0, 0);
    for x in points {
        while i < g.degrees.len() && g.degrees[i] <= x {
            cg += g.probs[i];
            i += 1;
        }
        while j < h.degrees.len() && h.degrees[j] <= x {
            ch += h.probs[j];
            j += 1;
        }
        if cg > ch + FOSD_TOL {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regular_and_errors() {
        let f = make_regular(5).unwrap();
        assert_eq!(f.degrees(), &[5]);
        assert_eq!(f.probs(), &[1.0]);
        assert!(make_regular(0).is_err());
        assert!(make_two_degree(7, 3, 0.5).is_err());
        assert!(make_jackson_rogers(0.0, 2.0, 200).is_err());
        assert!(make_jackson_rogers(7.0, -1.0, 200).is_err());
    }

    #[test]
    fn two_degree_degenerate() {
        let f = make_two_degree(6, 13, 0.0).unwrap();
        assert_eq!(f.prob(6), 1.0);
        assert_eq!(f.prob(13), 0.0);
        let f = make_two_degree(4, 4, 0.3).unwrap();
        assert_eq!(f.degrees(), &[4]);
    }

    #[test]
    fn csv_round_trip() {
        let f = make_jackson_rogers(3.0, 2.0, 30).unwrap();
        let g = DegreeDistribution::from_csv(&f.to_csv()).unwrap();
        assert_eq!(f.degrees(), g.degrees());
        for (a, b) in f.probs().iter().zip(g.probs()) {
            assert!((a - b).abs() < 1e-16);
        }
    }

    #[test]
    fn rejects_bad_pmf() {
        assert!(DegreeDistribution::from_pmf(&[(1, 0.5), (2, 0.6)], 2).is_err());
        assert!(DegreeDistribution::from_pmf(&[(0, 1.0)], 2).is_err());
        assert!(DegreeDistribution::from_pmf(&[(3, 1.0)], 2).is_err());
        assert!(DegreeDistribution::from_pmf(&[(1, -0.5), (2, 1.5)], 2).is_err());
    }
}
