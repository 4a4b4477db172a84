//! Parameter sweeps behind the figure command. Sweep points run in parallel
//! and are collected in sweep order, so output is deterministic.

use netadopt::adoption_game::GameParams;
use netadopt::degree_dist::{make_jackson_rogers, make_regular, make_two_degree, moments, DegreeDistribution};
use netadopt::optimizer::{optimize_capped_referral, optimize_referral, optimize_two_price, ReferralSearch};
use netadopt::Result;
use rayon::prelude::*;

use crate::svg::{Plot, Series};
use crate::table::Table;

pub const FIGURE_IDS: [u32; 7] = [2, 3, 4, 5, 6, 7, 8];
pub const DEFAULT_FIXED_M: [f64; 3] = [3.0, 7.0, 12.0];
pub const DEFAULT_CAPS: [u32; 5] = [1, 2, 3, 5, 10];

pub struct FigureOptions {
    pub fixed_m: Vec<f64>,
    pub caps: Vec<u32>,
    pub d_max: u32,
}

pub struct Figure {
    pub table: Table,
    /// File suffix and plot, one per panel.
    pub plots: Vec<(String, Plot)>,
}

fn optima(params: &GameParams, f: &DegreeDistribution) -> Result<(f64, f64)> {
    let two = optimize_two_price(params, f, true).best_profit;
    let referral = optimize_referral(params, f, true, &ReferralSearch::default())?.best_profit;
    Ok((two, referral))
}

fn sweep<T: Sync, R: Send>(xs: &[T], g: impl Fn(&T) -> Result<R> + Sync + Send) -> Result<Vec<R>> {
    xs.par_iter().map(g).collect()
}

fn header(id: u32, params: &GameParams, what: &str) -> Table {
    Table::new(Vec::<String>::new()).meta(format!("figure {id}: {what}")).meta(format!(
        "params a0h={},a1h={},a0l={},a1l={},p={}",
        params.a0h(),
        params.a1h(),
        params.a0l(),
        params.a1l(),
        params.p()
    ))
}

fn series(table: &Table, x: &str, y: &str, label: &str, dashed: bool, color: usize) -> Series {
    let xs = table.column(x).unwrap_or_default();
    let ys = table.column(y).unwrap_or_default();
    Series { label: label.to_string(), points: xs.into_iter().zip(ys).collect(), dashed, color }
}

fn plot(title: &str, x_label: &str, y_label: &str, series: Vec<Series>) -> Plot {
    Plot { title: title.into(), x_label: x_label.into(), y_label: y_label.into(), series }
}

fn m_grid() -> Vec<f64> {
    (4..=30).map(|i| i as f64 * 0.5).collect()
}

pub fn figure(id: u32, params: &GameParams, opts: &FigureOptions) -> Result<Figure> {
    match id {
        2 => regular(params),
        3 => mean_degree(params, opts),
        4 => spread(params, opts),
        5 => variance(params, opts),
        6 => two_degree(6, params, (5..=20).map(|dl| (dl, dl + 7)).collect()),
        7 => two_degree(7, params, (12..=190).map(|du| (6, du)).collect()),
        8 => capped(params, opts),
        _ => Err(netadopt::Error::InvalidParameter { name: "id", reason: format!("unknown figure {id}, expected one of 2..8") }),
    }
}

fn regular(params: &GameParams) -> Result<Figure> {
    let ds: Vec<u32> = (1..=200).collect();
    let vals = sweep(&ds, |&d| optima(params, &make_regular(d)?))?;
    let mut table = header(2, params, "optimal profits on d-regular networks");
    table.columns = ["d", "two_price", "referral", "a1h"].map(String::from).to_vec();
    for (&d, (two, referral)) in ds.iter().zip(vals) {
        table.push(vec![d as f64, two, referral, params.a1h()]);
    }
    let p = plot(
        "Optimal profit on d-regular networks",
        "degree d",
        "profit",
        vec![
            series(&table, "d", "two_price", "two-price", false, 0),
            series(&table, "d", "referral", "referral", false, 1),
            series(&table, "d", "a1h", "A1H", true, 7),
        ],
    );
    Ok(Figure { table, plots: vec![(String::new(), p)] })
}

fn mean_degree(params: &GameParams, opts: &FigureOptions) -> Result<Figure> {
    let ms = m_grid();
    let vals = sweep(&ms, |&m| optima(params, &make_jackson_rogers(m, 2.0, opts.d_max)?))?;
    let mut table = header(3, params, "optimal profits vs mean degree m, Jackson-Rogers r=2")
        .meta(format!("d_max={}", opts.d_max));
    table.columns = ["m", "two_price", "referral"].map(String::from).to_vec();
    for (&m, (two, referral)) in ms.iter().zip(vals) {
        table.push(vec![m, two, referral]);
    }
    let p = plot(
        "Optimal profit vs mean degree (r = 2)",
        "m",
        "profit",
        vec![
            series(&table, "m", "two_price", "two-price", true, 0),
            series(&table, "m", "referral", "referral", false, 1),
        ],
    );
    Ok(Figure { table, plots: vec![(String::new(), p)] })
}

fn spread(params: &GameParams, opts: &FigureOptions) -> Result<Figure> {
    let ms = m_grid();
    let mut table = header(4, params, "degree standard deviation vs m, Jackson-Rogers r=2")
        .meta(format!("d_max={}", opts.d_max));
    table.columns = ["m", "mean", "std_dev"].map(String::from).to_vec();
    for &m in &ms {
        let (mean, sd) = moments(&make_jackson_rogers(m, 2.0, opts.d_max)?);
        table.push(vec![m, mean, sd]);
    }
    let p = plot("Degree standard deviation (r = 2)", "m", "standard deviation", vec![series(
        &table, "m", "std_dev", "std dev", false, 0,
    )]);
    Ok(Figure { table, plots: vec![(String::new(), p)] })
}

fn m_tag(m: f64) -> String {
    format!("{m}").replace('.', "p")
}

fn variance(params: &GameParams, opts: &FigureOptions) -> Result<Figure> {
    let inv_r: Vec<f64> = (0..=20).map(|i| i as f64 * 0.05).collect();
    let points: Vec<(f64, f64)> = opts.fixed_m.iter().flat_map(|&m| inv_r.iter().map(move |&x| (m, x))).collect();
    let vals = sweep(&points, |&(m, x)| {
        let r = if x == 0.0 { f64::INFINITY } else { 1.0 / x };
        optima(params, &make_jackson_rogers(m, r, opts.d_max)?)
    })?;
    let mut table = header(5, params, "optimal profits vs 1/r at fixed mean degree, Jackson-Rogers")
        .meta(format!("d_max={}; 1/r=0 is the exponential limit", opts.d_max));
    let mut columns = vec!["inv_r".to_string()];
    for &m in &opts.fixed_m {
        columns.push(format!("two_price_m{}", m_tag(m)));
        columns.push(format!("referral_m{}", m_tag(m)));
    }
    table.columns = columns;
    for (i, &x) in inv_r.iter().enumerate() {
        let mut row = vec![x];
        for k in 0..opts.fixed_m.len() {
            let (two, referral) = vals[k * inv_r.len() + i];
            row.extend([two, referral]);
        }
        table.push(row);
    }
    let mut lines = Vec::new();
    for (k, &m) in opts.fixed_m.iter().enumerate() {
        let t = m_tag(m);
        lines.push(series(&table, "inv_r", &format!("two_price_m{t}"), &format!("two-price m={m}"), true, k));
        lines.push(series(&table, "inv_r", &format!("referral_m{t}"), &format!("referral m={m}"), false, k));
    }
    let p = plot("Optimal profit vs 1/r", "1/r", "profit", lines);
    Ok(Figure { table, plots: vec![(String::new(), p)] })
}

fn two_degree(id: u32, params: &GameParams, pairs: Vec<(u32, u32)>) -> Result<Figure> {
    const Q: f64 = 0.1;
    let vals = sweep(&pairs, |&(dl, du)| {
        let f = make_two_degree(dl, du, Q)?;
        let (mean, sd) = moments(&f);
        let (two, referral) = optima(params, &f)?;
        Ok((mean, sd, two, referral))
    })?;
    let what = if id == 6 {
        "two-degree, d_u = d_l + 7, f(d_u) = 0.1, d_l = 5..20"
    } else {
        "two-degree, d_l = 6, f(d_u) = 0.1, d_u = 12..190"
    };
    let mut table = header(id, params, what);
    table.columns = ["d_l", "d_u", "mean", "std_dev", "two_price", "referral"].map(String::from).to_vec();
    for (&(dl, du), (mean, sd, two, referral)) in pairs.iter().zip(vals) {
        table.push(vec![dl as f64, du as f64, mean, sd, two, referral]);
    }
    let profits = plot(
        "Optimal profit on two-degree networks",
        "mean degree",
        "profit",
        vec![
            series(&table, "mean", "two_price", "two-price", true, 0),
            series(&table, "mean", "referral", "referral", false, 1),
        ],
    );
    let sd = plot("Degree standard deviation", "mean degree", "standard deviation", vec![series(
        &table, "mean", "std_dev", "std dev", false, 0,
    )]);
    Ok(Figure { table, plots: vec![(String::new(), profits), ("_std".to_string(), sd)] })
}

fn capped(params: &GameParams, opts: &FigureOptions) -> Result<Figure> {
    let ms: Vec<f64> = (2..=15).map(f64::from).collect();
    let search = ReferralSearch::default();
    // cap None is the uncapped referral optimum
    let curves: Vec<Option<u32>> = std::iter::once(None).chain(opts.caps.iter().map(|&c| Some(c))).collect();
    let points: Vec<(f64, Option<u32>)> = ms.iter().flat_map(|&m| curves.iter().map(move |&c| (m, c))).collect();
    let vals = sweep(&points, |&(m, cap)| {
        let f = make_jackson_rogers(m, 2.0, opts.d_max)?;
        Ok(match cap {
            None => optimize_referral(params, &f, true, &search)?.best_profit,
            Some(c) => optimize_capped_referral(params, &f, c, true, &search)?.best_profit,
        })
    })?;
    let twos = sweep(&ms, |&m| Ok(optimize_two_price(params, &make_jackson_rogers(m, 2.0, opts.d_max)?, true).best_profit))?;
    let mut table = header(8, params, "capped-referral optimal profits vs m, Jackson-Rogers r=2")
        .meta(format!("d_max={}", opts.d_max));
    let mut columns = vec!["m".to_string(), "two_price".to_string(), "referral".to_string()];
    columns.extend(opts.caps.iter().map(|c| format!("cap_{c}")));
    table.columns = columns;
    for (i, &m) in ms.iter().enumerate() {
        let mut row = vec![m, twos[i]];
        row.extend_from_slice(&vals[i * curves.len()..(i + 1) * curves.len()]);
        table.push(row);
    }
    let mut lines = vec![
        series(&table, "m", "two_price", "two-price", true, 0),
        series(&table, "m", "referral", "uncapped", false, 1),
    ];
    for (k, c) in opts.caps.iter().enumerate() {
        lines.push(series(&table, "m", &format!("cap_{c}"), &format!("cap {c}"), false, k + 2));
    }
    let p = plot("Capped referral optima (r = 2)", "m", "profit", lines);
    Ok(Figure { table, plots: vec![(String::new(), p)] })
}
