use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use netadopt::adoption_game::{
    early_fraction, equilibrium_csv, informational_efficiency, solve_equilibrium, GameParams, PricingPolicy,
};
use netadopt::degree_dist::moments;
use netadopt::finite_game::{
    all_profiles, enumerate_pure_nash, profiles_csv, star_mixed, symmetric_mixed_complete, Topology,
};
use netadopt::format::real;
use netadopt::optimizer::{
    optimize_capped_referral, optimize_full, optimize_referral, optimize_two_price, OptimizationResult, PolicyClass,
    ReferralSearch,
};
use netadopt::pricing::limit_profit;
use rayon::prelude::*;

use crate::config::{
    DistributionSection, ExperimentConfig, FigureSection, FiniteSection, OutputSection, ParamsSection, PolicySection,
    SweepSection,
};
use crate::figures::{self, FigureOptions, DEFAULT_CAPS, DEFAULT_FIXED_M, FIGURE_IDS};
use crate::table::Table;
use crate::CliError;

/// `println!` that reports write errors instead of panicking on a closed pipe.
macro_rules! say {
    ($($arg:tt)*) => {
        writeln!(std::io::stdout(), $($arg)*)?
    };
}

#[derive(Debug, Parser)]
#[command(name = "netadopt", version, about = "Network technology adoption: equilibria, profits and pricing")]
pub struct Cli {
    /// Game parameters `a0h,a1h,a0l,a1l,p`.
    #[arg(long, global = true, value_name = "LIST", allow_hyphen_values = true)]
    pub params: Option<String>,
    /// Directory for CSV and SVG output; CSV goes to stdout without it.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// TOML config; flags override its values.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Also write SVG plots (figure command).
    #[arg(long, global = true)]
    pub svg: bool,
    /// Write the effective config after applying flags.
    #[arg(long, global = true, value_name = "FILE")]
    pub save_config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Default)]
pub struct PolicyArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub p0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub p1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub eta: Option<f64>,
    /// Maximum number of referrals paid per adopter.
    #[arg(long)]
    pub cap: Option<u32>,
    /// Monopolist does not observe the quality.
    #[arg(long)]
    pub uninformed: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mean-field equilibrium for one policy.
    Solve {
        /// `regular:d`, `two-degree:dl,du,q`, `jackson-rogers:m,r[,dmax]` or `file:PATH`.
        #[arg(long)]
        dist: Option<String>,
        #[command(flatten)]
        policy: PolicyArgs,
    },
    /// Limit profit at a policy, optionally swept over one price.
    Profit {
        #[arg(long)]
        dist: Option<String>,
        #[command(flatten)]
        policy: PolicyArgs,
        /// two_price, referral or full.
        #[arg(long)]
        class: Option<String>,
        /// `VAR=start:stop:points` with VAR one of P0, P1, eta.
        #[arg(long, allow_hyphen_values = true)]
        sweep: Option<String>,
    },
    /// Optimal policy within a class.
    Optimize {
        #[arg(long)]
        dist: Option<String>,
        #[arg(long)]
        class: Option<String>,
        #[arg(long)]
        cap: Option<u32>,
        #[arg(long)]
        uninformed: bool,
    },
    /// Regenerate a figure (2 to 8).
    Figure {
        id: u32,
        /// Mean degrees for figure 5.
        #[arg(long, value_delimiter = ',')]
        fixed_m: Option<Vec<f64>>,
        /// Referral caps for figure 8.
        #[arg(long, value_delimiter = ',')]
        caps: Option<Vec<u32>>,
        #[arg(long)]
        d_max: Option<u32>,
    },
    /// Pure and symmetric mixed equilibria on small complete or star networks.
    Finite {
        #[arg(long)]
        topology: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[command(flatten)]
        policy: PolicyArgs,
    },
    /// Build a degree distribution and write it as CSV.
    Dist {
        #[arg(long)]
        dist: Option<String>,
    },
}

fn policy_section(p: &PolicyArgs) -> PolicySection {
    PolicySection {
        p0: p.p0,
        p1: p.p1,
        eta: p.eta,
        cap: p.cap,
        informed: p.uninformed.then_some(false),
        class: None,
    }
}

/// Config values carried by the command-line flags alone.
fn flag_config(cli: &Cli) -> Result<ExperimentConfig, CliError> {
    let mut c = ExperimentConfig {
        params: cli.params.as_deref().map(ParamsSection::parse_list).transpose()?,
        output: OutputSection { dir: cli.out.clone(), svg: cli.svg.then_some(true) },
        ..Default::default()
    };
    let dist = |d: &Option<String>| DistributionSection { spec: d.clone() };
    match &cli.command {
        Command::Solve { dist: d, policy } => {
            c.distribution = dist(d);
            c.policy = policy_section(policy);
        }
        Command::Profit { dist: d, policy, class, sweep } => {
            c.distribution = dist(d);
            c.policy = policy_section(policy);
            c.policy.class = class.clone();
            c.sweep = sweep.as_deref().map(SweepSection::parse).transpose()?;
        }
        Command::Optimize { dist: d, class, cap, uninformed } => {
            c.distribution = dist(d);
            c.policy = PolicySection {
                cap: *cap,
                informed: uninformed.then_some(false),
                class: class.clone(),
                ..Default::default()
            };
        }
        Command::Figure { fixed_m, caps, d_max, .. } => {
            c.figure = FigureSection { fixed_m: fixed_m.clone(), caps: caps.clone(), d_max: *d_max };
        }
        Command::Finite { topology, n, policy } => {
            c.finite = FiniteSection { topology: topology.clone(), n: *n };
            c.policy = policy_section(policy);
        }
        Command::Dist { dist: d } => c.distribution = dist(d),
    }
    Ok(c)
}

pub fn execute(cli: Cli) -> Result<(), CliError> {
    let mut config = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    config.overlay(&flag_config(&cli)?);
    config.validate()?;
    if let Some(path) = &cli.save_config {
        fs::write(path, config.to_toml())?;
    }
    let sink = Sink { dir: config.output.dir.clone() };
    match &cli.command {
        Command::Solve { .. } => cmd_solve(&config, &sink),
        Command::Profit { .. } => cmd_profit(&config, &sink),
        Command::Optimize { .. } => cmd_optimize(&config, &sink),
        Command::Figure { id, .. } => cmd_figure(*id, &config, &sink),
        Command::Finite { .. } => cmd_finite(&config, &sink),
        Command::Dist { .. } => cmd_dist(&config, &sink),
    }
}

struct Sink {
    dir: Option<PathBuf>,
}

impl Sink {
    /// Writes `content` to `DIR/name`, or to stdout without an output dir.
    fn emit(&self, name: &str, content: &str) -> Result<(), CliError> {
        match &self.dir {
            Some(dir) => {
                fs::create_dir_all(dir)?;
                let path = dir.join(name);
                fs::write(&path, content)?;
                eprintln!("wrote {}", path.display());
            }
            None => std::io::stdout().write_all(content.as_bytes())?,
        }
        Ok(())
    }

    fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }
}

fn build_policy(config: &ExperimentConfig) -> Result<PricingPolicy, CliError> {
    let p = &config.policy;
    Ok(PricingPolicy::new(p.p0.unwrap_or(0.0), p.p1.unwrap_or(0.0), p.eta.unwrap_or(0.0))?
        .with_cap(p.cap)?
        .with_informed(p.informed.unwrap_or(true)))
}

fn params_meta(params: &GameParams) -> String {
    format!(
        "params a0h={},a1h={},a0l={},a1l={},p={}",
        params.a0h(),
        params.a1h(),
        params.a0l(),
        params.a1l(),
        params.p()
    )
}

fn policy_meta(policy: &PricingPolicy) -> String {
    format!(
        "policy P0={},P1={},eta={},cap={},informed={}",
        policy.p0(),
        policy.p1(),
        policy.eta(),
        policy.referral_cap().map_or_else(|| "none".to_string(), |c| c.to_string()),
        policy.monopolist_informed()
    )
}

fn class_of(config: &ExperimentConfig, default: Option<PolicyClass>) -> Result<PolicyClass, CliError> {
    match (&config.policy.class, default) {
        (Some(tag), _) => Ok(tag.parse()?),
        (None, Some(c)) => Ok(c),
        (None, None) => Err(CliError::Invalid(
            "missing policy class: set `class` under [policy] in the config or pass --class".into(),
        )),
    }
}

fn cmd_solve(config: &ExperimentConfig, sink: &Sink) -> Result<(), CliError> {
    let params = config.game_params()?;
    let f = config.degree_distribution()?;
    let policy = build_policy(config)?;
    let eq = solve_equilibrium(&params, &policy, &f)?;
    let beta = early_fraction(&eq.strategy, &f);
    let efficiency = informational_efficiency(&eq.strategy, &f);
    say!("alpha_star={}", eq.alpha_star);
    say!("d_L={}", eq.d_lower);
    say!("d_U={}", eq.d_upper);
    say!("beta={beta}");
    say!("E={}", efficiency.map_or_else(|| "undefined".to_string(), |e| e.to_string()));
    let csv = format!(
        "# {}\n# {}\n{}",
        params_meta(&params),
        policy_meta(&policy),
        equilibrium_csv(&eq, &params, &policy)
    );
    sink.emit("equilibrium.csv", &csv)
}

fn cmd_profit(config: &ExperimentConfig, sink: &Sink) -> Result<(), CliError> {
    let params = config.game_params()?;
    let f = config.degree_distribution()?;
    let base = build_policy(config)?;
    let class = class_of(config, Some(PolicyClass::Full))?;
    let sweep = config.sweep.clone().unwrap_or(SweepSection {
        variable: "P0".into(),
        start: base.p0(),
        stop: base.p0(),
        points: 1,
    });
    let xs = sweep.values();
    let rows: Vec<_> = xs
        .par_iter()
        .map(|&x| -> Result<_, CliError> {
            let (p0, p1, eta) = match sweep.variable.as_str() {
                "P0" => (x, base.p1(), base.eta()),
                "P1" => (base.p0(), x, base.eta()),
                _ => (base.p0(), base.p1(), x),
            };
            let policy = PricingPolicy::new(p0, p1, eta)?
                .with_cap(base.referral_cap())?
                .with_informed(base.monopolist_informed());
            if !class.contains(&policy) {
                return Err(CliError::Invalid(format!(
                    "policy ({p0}, {p1}, {eta}) is outside the {class} class"
                )));
            }
            Ok(limit_profit(&params, &policy, &f, class)?)
        })
        .collect::<Result<_, _>>()?;
    let mut table = Table::new(["param", "beta", "gamma_H", "phi_H", "profit"])
        .meta(params_meta(&params))
        .meta(policy_meta(&base))
        .meta(format!("class={class}; sweep {}", sweep.variable));
    for (&x, lp) in xs.iter().zip(&rows) {
        let b = &lp.breakdown;
        table.push(vec![x, b.beta, b.gamma_h, b.phi_h, lp.value]);
        if lp.corner {
            table.meta.push(format!(
                "corner policy at {}={}{}",
                sweep.variable,
                real(x),
                if lp.degenerate { " (degenerate point)" } else { "" }
            ));
        }
    }
    if rows.len() == 1 {
        say!("profit={}", rows[0].value);
    }
    sink.emit("profit.csv", &table.to_csv())
}

fn cmd_optimize(config: &ExperimentConfig, sink: &Sink) -> Result<(), CliError> {
    let params = config.game_params()?;
    let f = config.degree_distribution()?;
    let class = class_of(config, None)?;
    let informed = config.policy.informed.unwrap_or(true);
    let search = ReferralSearch::default();
    let result: OptimizationResult = match (class, config.policy.cap) {
        (PolicyClass::TwoPrice, None) => optimize_two_price(&params, &f, informed),
        (PolicyClass::Full, None) => optimize_full(&params, &f, informed),
        (PolicyClass::Referral, None) => optimize_referral(&params, &f, informed, &search)?,
        (PolicyClass::Referral, Some(cap)) => optimize_capped_referral(&params, &f, cap, informed, &search)?,
        (_, Some(_)) => {
            return Err(CliError::Invalid("a referral cap only applies to the referral class".into()));
        }
    };
    let best = &result.best_policy;
    let eq = &result.equilibrium;
    say!("class={class}");
    say!("P0={}", best.p0());
    say!("P1={}", best.p1());
    say!("eta={}", best.eta());
    say!("profit={}", result.best_profit);
    say!("alpha_star={}", eq.alpha_star);
    say!("d_L={}", eq.d_lower);
    say!("d_U={}", eq.d_upper);
    if let Some(d) = &result.diagnostic {
        eprintln!("note: {d}");
    }
    let mut csv = format!(
        "# {}\n# class={class}; informed={informed}; cap={}\n# best P0={},P1={},eta={}\n# best profit={}\n",
        params_meta(&params),
        config.policy.cap.map_or_else(|| "none".to_string(), |c| c.to_string()),
        real(best.p0()),
        real(best.p1()),
        real(best.eta()),
        real(result.best_profit)
    );
    if class == PolicyClass::Full {
        csv.push_str("# the full-class optimum is a limit approached with eta decreasing to 0\n");
    }
    if let Some(d) = &result.diagnostic {
        csv.push_str(&format!("# {d}\n"));
    }
    csv.push_str(&result.trace_csv());
    sink.emit(&format!("optimize_{}.csv", class.tag()), &csv)
}

fn cmd_figure(id: u32, config: &ExperimentConfig, sink: &Sink) -> Result<(), CliError> {
    if !FIGURE_IDS.contains(&id) {
        return Err(CliError::Invalid(format!("unknown figure {id}, expected one of 2, 3, 4, 5, 6, 7, 8")));
    }
    let svg = config.output.svg.unwrap_or(false);
    if svg && sink.dir().is_none() {
        return Err(CliError::Invalid("--svg needs an output directory (--out)".into()));
    }
    let params = config.game_params()?;
    let opts = FigureOptions {
        fixed_m: config.figure.fixed_m.clone().unwrap_or_else(|| DEFAULT_FIXED_M.to_vec()),
        caps: config.figure.caps.clone().unwrap_or_else(|| DEFAULT_CAPS.to_vec()),
        d_max: config.d_max(),
    };
    let fig = figures::figure(id, &params, &opts)?;
    sink.emit(&format!("fig{id}.csv"), &fig.table.to_csv())?;
    if svg {
        for (suffix, plot) in &fig.plots {
            sink.emit(&format!("fig{id}{suffix}.svg"), &plot.render())?;
        }
    }
    Ok(())
}

fn cmd_finite(config: &ExperimentConfig, sink: &Sink) -> Result<(), CliError> {
    let params = config.game_params()?;
    let policy = build_policy(config)?;
    let topology = match config.finite.topology.as_deref().unwrap_or("complete") {
        "complete" => Topology::Complete,
        "star" => Topology::Star,
        other => return Err(CliError::Invalid(format!("unknown topology `{other}`, expected complete or star"))),
    };
    let n = config.finite.n.ok_or_else(|| {
        CliError::Invalid("missing network size: set `n` under [finite] in the config or pass --n".into())
    })?;
    let nash = enumerate_pure_nash(topology, n, &params, &policy)?;
    let profiles: Vec<Vec<bool>> = match topology {
        // one representative per adopter count
        Topology::Complete => (0..=n).map(|k| (0..n).map(|i| i < k).collect()).collect(),
        Topology::Star => all_profiles(n).collect(),
    };
    for p in &nash {
        say!("nash {} x{}", p.label(), p.multiplicity);
    }
    let mixed = match topology {
        Topology::Complete => {
            let w = symmetric_mixed_complete(n, &params, &policy)?;
            format!("symmetric mixing weight {}", w.weight())
        }
        Topology::Star => match star_mixed(n, &params, &policy)? {
            Some((c, w)) => format!("interior mixed: center {c}, periphery {w}"),
            None => "no interior mixed profile of the center/periphery form".to_string(),
        },
    };
    say!("{mixed}");
    let mut csv = format!("# {}\n# {}\n# {mixed}\n", params_meta(&params), policy_meta(&policy));
    match topology {
        Topology::Complete => csv.push_str("# one representative profile per adopter count, first agents adopting\n"),
        Topology::Star => csv.push_str(&format!("# the center is agent {n}\n")),
    }
    csv.push_str(&profiles_csv(topology, &profiles, &params, &policy));
    sink.emit(&format!("finite_{}_{n}.csv", topology.tag()), &csv)
}

fn cmd_dist(config: &ExperimentConfig, sink: &Sink) -> Result<(), CliError> {
    let f = config.degree_distribution()?;
    let (mean, sd) = moments(&f);
    say!("mean={mean}");
    say!("std_dev={sd}");
    let csv = format!(
        "# spec={}\n# mean={},std_dev={}\n{}",
        config.distribution.spec.as_deref().unwrap_or(""),
        real(mean),
        real(sd),
        f.to_csv()
    );
    sink.emit("distribution.csv", &csv)
}
