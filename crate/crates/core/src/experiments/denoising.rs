//! Denoising of a clustered signal with SLOPE, sorted MCP and sorted l_1/2.
//!
//! Ground truth: `sizes[k]` copies of `values[k]`. Each replicate adds
//! Gaussian noise; the estimate is the prox (unit stepsize) of the penalty at
//! the noisy signal. Weights are `r (p - i)` for SLOPE and sorted MCP and
//! `r (p - i)^1.5` for sorted l_1/2, for `r` on a geometric grid.
//!
//! Keys: `seed`, `replicates`, `sigma`, `values`, `sizes`, `slope.r_min`,
//! `slope.r_max`, `smcp.r_min`, `smcp.r_max`, `smcp.gamma`, `lhalf.r_min`,
//! `lhalf.r_max` (required); `grid_points` (100), `f1_threshold` (0.75),
//! `value_tol` (1e-8), `shuffle` (false).

use rayon::prelude::*;

use super::data::{add_noise_sigma, gen_clustered_signal, stream_rng};
use super::metrics::{f1_cluster, mean_std, normalized_error};
use super::{decaying_weights, geometric_grid, seed, Config, Report, Table};
use crate::error::Result;
use crate::penalty::PenaltyFamily;
use crate::prox::{prox, SortedPenalty};

const KNOWN: &[&str] = &[
    "seed", "replicates", "sigma", "values", "sizes", "grid_points", "f1_threshold", "value_tol",
    "shuffle", "slope.r_min", "slope.r_max", "smcp.r_min", "smcp.r_max", "smcp.gamma",
    "lhalf.r_min", "lhalf.r_max",
];

struct Method {
    name: &'static str,
    family: PenaltyFamily,
    exponent: f64,
    grid: Vec<f64>,
}

pub fn run_denoising(config: &Config) -> Result<Report> {
    config.check_known(KNOWN)?;
    let seed = seed(config)?;
    let replicates: usize = config.get("replicates")?;
    let sigma: f64 = config.get("sigma")?;
    let values: Vec<f64> = config.list("values")?;
    let sizes: Vec<usize> = config.list("sizes")?;
    let points: usize = config.get_or("grid_points", 100)?;
    let threshold: f64 = config.get_or("f1_threshold", 0.75)?;
    let value_tol: f64 = config.get_or("value_tol", 1e-8)?;
    let shuffle = config.bool_or("shuffle", false)?;
    let p: usize = sizes.iter().sum();
    let truth = gen_clustered_signal(p, &values, &sizes, shuffle, seed)?;

    let grid = |name: &str| -> Result<Vec<f64>> {
        geometric_grid(config.positive(&format!("{name}.r_min"))?, config.positive(&format!("{name}.r_max"))?, points)
    };
    let methods = [
        Method { name: "slope", family: PenaltyFamily::L1, exponent: 1.0, grid: grid("slope")? },
        Method {
            name: "smcp",
            family: PenaltyFamily::mcp(config.positive("smcp.gamma")?)?,
            exponent: 1.0,
            grid: grid("smcp")?,
        },
        Method { name: "lhalf", family: PenaltyFamily::Lq { q: 0.5 }, exponent: 1.5, grid: grid("lhalf")? },
    ];

    let noisy: Vec<Vec<f64>> = (0..replicates)
        .map(|rep| add_noise_sigma(&truth, sigma, &mut stream_rng(seed, rep as u64)))
        .collect();

    let tasks: Vec<(usize, f64)> = methods
        .iter()
        .enumerate()
        .flat_map(|(m, method)| method.grid.iter().map(move |&r| (m, r)))
        .collect();
    let stats: Vec<[f64; 4]> = tasks
        .par_iter()
        .map(|&(m, r)| {
            let method = &methods[m];
            let pen = SortedPenalty::new(method.family, decaying_weights(p, r, method.exponent), 1.0)?;
            let mut f1 = Vec::with_capacity(replicates);
            let mut err = Vec::with_capacity(replicates);
            for y in &noisy {
                let x = prox(&pen, y)?.x;
                f1.push(f1_cluster(&x, &truth, value_tol));
                err.push(normalized_error(&x, &truth));
            }
            let (f1m, f1s) = mean_std(&f1);
            let (em, es) = mean_std(&err);
            Ok([f1m, f1s, em, es])
        })
        .collect::<Result<_>>()?;

    let mut rows = Table::new("denoising", &["penalty", "r", "f1_mean", "f1_std", "err_mean", "err_std"]);
    let mut summary = Table::new("selection", &["penalty", "r", "f1_mean", "err_mean", "found"]);
    for (m, method) in methods.iter().enumerate() {
        let mut selected = None;
        for (&(tm, r), s) in tasks.iter().zip(&stats) {
            if tm != m {
                continue;
            }
            rows.push(vec![method.name.into(), r.into(), s[0].into(), s[1].into(), s[2].into(), s[3].into()]);
            if selected.is_none() && s[0] >= threshold {
                selected = Some((r, s[0], s[2]));
            }
        }
        let (r, f1, err) = selected.unwrap_or((f64::NAN, f64::NAN, f64::NAN));
        summary.push(vec![method.name.into(), r.into(), f1.into(), err.into(), selected.is_some().into()]);
    }
    Ok(Report { tables: vec![rows, summary] })
}
