//! Experiment configuration: a TOML file of `[section]` headers and
//! `key = value` lines, overlaid by command-line flags.

use std::path::{Path, PathBuf};

use netadopt::adoption_game::GameParams;
use netadopt::degree_dist::{
    make_jackson_rogers, make_regular, make_two_degree, DegreeDistribution, DEFAULT_D_MAX,
};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<ParamsSection>,
    #[serde(default, skip_serializing_if = "DistributionSection::is_empty")]
    pub distribution: DistributionSection,
    #[serde(default, skip_serializing_if = "PolicySection::is_empty")]
    pub policy: PolicySection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
    #[serde(default, skip_serializing_if = "FigureSection::is_empty")]
    pub figure: FigureSection,
    #[serde(default, skip_serializing_if = "FiniteSection::is_empty")]
    pub finite: FiniteSection,
    #[serde(default, skip_serializing_if = "OutputSection::is_empty")]
    pub output: OutputSection,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSection {
    pub a0h: f64,
    pub a1h: f64,
    pub a0l: f64,
    pub a1l: f64,
    pub p: f64,
}

impl Default for ParamsSection {
    fn default() -> Self {
        let g = GameParams::default();
        Self { a0h: g.a0h(), a1h: g.a1h(), a0l: g.a0l(), a1l: g.a1l(), p: g.p() }
    }
}

impl ParamsSection {
    /// Parses `a0h,a1h,a0l,a1l,p`.
    pub fn parse_list(s: &str) -> Result<Self, CliError> {
        let v = parse_floats(s, "--params")?;
        if v.len() != 5 {
            return Err(CliError::Invalid(format!(
                "--params expects five values a0h,a1h,a0l,a1l,p, got {}",
                v.len()
            )));
        }
        Ok(Self { a0h: v[0], a1h: v[1], a0l: v[2], a1l: v[3], p: v[4] })
    }

    pub fn build(&self) -> Result<GameParams, CliError> {
        Ok(GameParams::new(self.a0h, self.a1h, self.a0l, self.a1l, self.p)?)
    }
}

macro_rules! all_none {
    ($s:ident: $($f:ident),+) => {
        impl $s {
            fn is_empty(&self) -> bool {
                $(self.$f.is_none())&&+
            }

            /// Fields set in `other` replace ours.
            pub fn overlay(&mut self, other: &Self) {
                $(if other.$f.is_some() {
                    self.$f = other.$f.clone();
                })+
            }
        }
    };
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistributionSection {
    /// `regular:d`, `two-degree:dl,du,q`, `jackson-rogers:m,r[,dmax]` or
    /// `file:path`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spec: Option<String>,
}
all_none!(DistributionSection: spec);

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicySection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub informed: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<String>,
}
all_none!(PolicySection: p0, p1, eta, cap, informed, class);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    /// One of `P0`, `P1`, `eta`.
    pub variable: String,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl SweepSection {
    /// Parses `VAR=start:stop:points`.
    pub fn parse(s: &str) -> Result<Self, CliError> {
        let bad = || CliError::Invalid(format!("--sweep expects VAR=start:stop:points, got `{s}`"));
        let (var, range) = s.split_once('=').ok_or_else(bad)?;
        let parts: Vec<&str> = range.split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let num = |t: &str| t.trim().parse::<f64>().map_err(|_| bad());
        let points = parts[2].trim().parse::<usize>().map_err(|_| bad())?;
        Ok(Self { variable: var.trim().to_string(), start: num(parts[0])?, stop: num(parts[1])?, points })
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !matches!(self.variable.as_str(), "P0" | "P1" | "eta") {
            return Err(CliError::Invalid(format!(
                "sweep variable `{}` must be P0, P1 or eta",
                self.variable
            )));
        }
        if self.points == 0 || !self.start.is_finite() || !self.stop.is_finite() {
            return Err(CliError::Invalid("sweep range is empty".into()));
        }
        if self.points > 1 && self.start == self.stop {
            return Err(CliError::Invalid("sweep range is empty: start equals stop".into()));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        netadopt::numeric::linspace(self.start, self.stop, self.points)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FigureSection {
    /// Mean degrees drawn in the variance figure.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed_m: Option<Vec<f64>>,
    /// Referral caps drawn in the capped-referral figure.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub caps: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_max: Option<u32>,
}
all_none!(FigureSection: fixed_m, caps, d_max);

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiniteSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub topology: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
}
all_none!(FiniteSection: topology, n);

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub svg: Option<bool>,
}
all_none!(OutputSection: dir, svg);

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Invalid(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Invalid(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config values are always representable")
    }

    /// Applies every value set in `flags` on top of `self`.
    pub fn overlay(&mut self, flags: &ExperimentConfig) {
        if flags.params.is_some() {
            self.params = flags.params;
        }
        self.distribution.overlay(&flags.distribution);
        self.policy.overlay(&flags.policy);
        if flags.sweep.is_some() {
            self.sweep = flags.sweep.clone();
        }
        self.figure.overlay(&flags.figure);
        self.finite.overlay(&flags.finite);
        self.output.overlay(&flags.output);
    }

    pub fn game_params(&self) -> Result<GameParams, CliError> {
        self.params.unwrap_or_default().build()
    }

    /// The configured distribution; an absent spec is an input error naming
    /// the key.
    pub fn degree_distribution(&self) -> Result<DegreeDistribution, CliError> {
        let spec = self.distribution.spec.as_deref().ok_or_else(|| {
            CliError::Invalid(
                "missing distribution: set `spec` under [distribution] in the config or pass --dist".into(),
            )
        })?;
        parse_distribution(spec)
    }

    /// Checks the file references and ranges without running anything.
    pub fn validate(&self) -> Result<(), CliError> {
        self.game_params()?;
        if let Some(spec) = &self.distribution.spec {
            parse_distribution(spec)?;
        }
        if let Some(sweep) = &self.sweep {
            sweep.validate()?;
        }
        if let Some(ms) = &self.figure.fixed_m {
            if ms.is_empty() {
                return Err(CliError::Invalid("figure.fixed_m is empty".into()));
            }
        }
        if let Some(caps) = &self.figure.caps {
            if caps.is_empty() || caps.contains(&0) {
                return Err(CliError::Invalid("figure.caps must be a nonempty list of positive caps".into()));
            }
        }
        Ok(())
    }

    pub fn d_max(&self) -> u32 {
        self.figure.d_max.unwrap_or(DEFAULT_D_MAX)
    }
}

fn parse_floats(s: &str, what: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            match t {
                "inf" | "+inf" => Ok(f64::INFINITY),
                _ => t.parse::<f64>().map_err(|_| CliError::Invalid(format!("{what}: `{t}` is not a number"))),
            }
        })
        .collect()
}

fn as_degree(x: f64, name: &str) -> Result<u32, CliError> {
    if x.fract() != 0.0 || !(0.0..=u32::MAX as f64).contains(&x) {
        return Err(CliError::Invalid(format!("{name} must be a nonnegative integer, got {x}")));
    }
    Ok(x as u32)
}

/// Builds a distribution from its spec string.
pub fn parse_distribution(spec: &str) -> Result<DegreeDistribution, CliError> {
    let (kind, args) = spec
        .split_once(':')
        .ok_or_else(|| CliError::Invalid(format!("distribution `{spec}`: expected KIND:ARGS")))?;
    let arity = |v: &[f64], lo: usize, hi: usize, usage: &str| {
        if v.len() < lo || v.len() > hi {
            Err(CliError::Invalid(format!("distribution `{spec}`: expected {usage}")))
        } else {
            Ok(())
        }
    };
    let f = match kind {
        "regular" => {
            let v = parse_floats(args, "regular")?;
            arity(&v, 1, 1, "regular:d")?;
            make_regular(as_degree(v[0], "d")?)?
        }
        "two-degree" => {
            let v = parse_floats(args, "two-degree")?;
            arity(&v, 3, 3, "two-degree:dl,du,q")?;
            make_two_degree(as_degree(v[0], "d_l")?, as_degree(v[1], "d_u")?, v[2])?
        }
        "jackson-rogers" => {
            let v = parse_floats(args, "jackson-rogers")?;
            arity(&v, 2, 3, "jackson-rogers:m,r[,dmax]")?;
            let d_max = match v.get(2) {
                Some(&x) => as_degree(x, "dmax")?,
                None => DEFAULT_D_MAX,
            };
            make_jackson_rogers(v[0], v[1], d_max)?
        }
        "file" => {
            let text = std::fs::read_to_string(args)
                .map_err(|e| CliError::Invalid(format!("distribution file {args}: {e}")))?;
            DegreeDistribution::from_csv(&text)?
        }
        other => {
            return Err(CliError::Invalid(format!(
                "unknown distribution kind `{other}`, expected regular, two-degree, jackson-rogers or file"
            )))
        }
    };
    Ok(f)
}
