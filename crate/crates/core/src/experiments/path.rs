//! Regularization paths on a tabular dataset.
//!
//! Features are standardized and the target centered. Lasso and MCP use a
//! constant weight `r`; SLOPE, sorted MCP and sorted l_1/2 use
//! `lam_i = r (i^(1/4) - (i-1)^(1/4))`. Strengths are visited in increasing
//! order, starting from the least-squares fit and warm-starting each solve
//! from the previous one.
//!
//! Keys: `seed`, `dataset`, `r_min`, `r_max` (required); `grid_points` (50),
//! `gamma` (1), `tol` (1e-9), `max_iter` (50000).

use std::path::Path;

use nalgebra::DVector;
use rayon::prelude::*;

use super::data::load_dataset_csv;
use super::{geometric_grid, power_increment_weights, seed, Config, Report, Table};
use crate::error::{Error, Result};
use crate::penalty::PenaltyFamily;
use crate::prox::SortedPenalty;
use crate::solver::{pgd, Datafit, ProblemInstance, SolverOptions};

const KNOWN: &[&str] = &["seed", "dataset", "r_min", "r_max", "grid_points", "gamma", "tol", "max_iter"];

pub fn run_path(config: &Config, dataset_csv: &Path) -> Result<Report> {
    config.check_known(KNOWN)?;
    seed(config)?;
    let data = load_dataset_csv(dataset_csv)?.standardized();
    let grid = geometric_grid(config.positive("r_min")?, config.positive("r_max")?, config.get_or("grid_points", 50)?)?;
    let gamma: f64 = config.get_or("gamma", 1.0)?;
    let opts = SolverOptions {
        tol: config.get_or("tol", 1e-9)?,
        max_iter: config.get_or("max_iter", 50_000)?,
        accelerated: true,
        ..Default::default()
    };
    let a = data.features.clone();
    let b = data.target.clone();
    let p = a.ncols();
    let ols = (a.transpose() * &a)
        .cholesky()
        .ok_or_else(|| Error::Numerical("normal equations are singular".into()))?
        .solve(&(a.transpose() * &b));

    let constant = |r: f64| vec![r; p];
    let sorted = |r: f64| power_increment_weights(p, r, 0.25);
    type Weights<'a> = &'a (dyn Fn(f64) -> Vec<f64> + Sync);
    let methods: Vec<(&str, PenaltyFamily, Weights)> = vec![
        ("lasso", PenaltyFamily::L1, &constant),
        ("mcp", PenaltyFamily::mcp(gamma)?, &constant),
        ("slope", PenaltyFamily::L1, &sorted),
        ("smcp", PenaltyFamily::mcp(gamma)?, &sorted),
        ("lhalf", PenaltyFamily::Lq { q: 0.5 }, &sorted),
    ];

    let paths: Vec<Vec<(DVector<f64>, usize, f64)>> = methods
        .par_iter()
        .map(|(_, family, weights)| {
            let mut x = ols.clone();
            let mut out = Vec::with_capacity(grid.len());
            for &r in &grid {
                let pen = SortedPenalty::new(*family, weights(r), 1.0)?;
                let inst = ProblemInstance::new(a.clone(), b.clone(), Datafit::LeastSquares, pen)?;
                let res = pgd(&inst, &SolverOptions { x0: Some(x.clone()), ..opts.clone() })?;
                x = res.x;
                out.push((x.clone(), res.iterations, res.trace.last_objective().unwrap_or(f64::NAN)));
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;

    let mut coefs = Table::new("path", &["penalty", "r", "feature", "coefficient"]);
    let mut runs = Table::new("runs", &["penalty", "r", "nonzeros", "distinct_magnitudes", "objective", "iterations"]);
    for ((name, _, _), path) in methods.iter().zip(&paths) {
        for (&r, (x, iters, obj)) in grid.iter().zip(path) {
            for (j, v) in x.iter().enumerate() {
                coefs.push(vec![(*name).into(), r.into(), data.feature_names[j].clone().into(), (*v).into()]);
            }
            runs.push(vec![
                (*name).into(),
                r.into(),
                x.iter().filter(|v| v.abs() > 0.0).count().into(),
                distinct_nonzero_magnitudes(x.as_slice(), 1e-8).into(),
                (*obj).into(),
                (*iters).into(),
            ]);
        }
    }
    Ok(Report { tables: vec![coefs, runs] })
}

/// Number of clusters among the nonzero magnitudes of `x`.
pub fn distinct_nonzero_magnitudes(x: &[f64], tol: f64) -> usize {
    let mut mags: Vec<f64> = x.iter().map(|v| v.abs()).filter(|&v| v > tol).collect();
    mags.sort_by(f64::total_cmp);
    let mut count = 0;
    let mut last = f64::NEG_INFINITY;
    for m in mags {
        if m - last > tol {
            count += 1;
            last = m;
        }
    }
    count
}
