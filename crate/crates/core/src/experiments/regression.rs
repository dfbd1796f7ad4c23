//! Sparse regression with a correlated Gaussian design.
//!
//! `A` has Toeplitz-correlated rows, the truth equals `true_value` on the
//! `support` ranges and 0 elsewhere, and `b = A x* + noise` at the given SNR.
//! All penalties use `lam_i = r (i^(2/3) - (i-1)^(2/3))` and each strength
//! `r` is solved by proximal gradient. Sorted MCP and sorted l_1/2 are
//! started from the SLOPE solution at the same strength (a zero start is a
//! fixed point of the l_1/2 iteration).
//!
//! Keys: `seed`, `n`, `p`, `rho`, `snr`, `support` (inclusive 0-based ranges
//! `a-b`), `true_value`, `strengths`, `smcp.gamma` (required); `tol` (1e-8),
//! `max_iter` (20000), `accelerated` (true), `zero_tol` (1e-8).

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use super::data::{add_noise_snr, gen_toeplitz_design, stream_rng};
use super::metrics::normalized_error;
use super::{power_increment_weights, seed, Config, Report, Table};
use crate::error::{Error, Result};
use crate::penalty::PenaltyFamily;
use crate::prox::SortedPenalty;
use crate::solver::{pgd, Datafit, ProblemInstance, SolverOptions, SolverOutput};

const KNOWN: &[&str] = &[
    "seed", "n", "p", "rho", "snr", "support", "true_value", "strengths", "smcp.gamma", "tol",
    "max_iter", "accelerated", "zero_tol",
];

/// Parses `a-b` ranges (inclusive) or single indices.
pub fn parse_support(items: &[String], p: usize) -> Result<Vec<bool>> {
    let mut mask = vec![false; p];
    for item in items {
        let (a, b) = match item.split_once('-') {
            Some((a, b)) => (a.trim().parse::<usize>(), b.trim().parse::<usize>()),
            None => (item.trim().parse::<usize>(), item.trim().parse::<usize>()),
        };
        let (a, b) = match (a, b) {
            (Ok(a), Ok(b)) if a <= b && b < p => (a, b),
            _ => return Err(Error::Config(format!("invalid support range `{item}` for p = {p}"))),
        };
        mask[a..=b].fill(true);
    }
    Ok(mask)
}

/// Synthetic regression problem.
#[derive(Debug, Clone)]
pub struct RegressionData {
    pub a: DMatrix<f64>,
    pub b: DVector<f64>,
    pub truth: Vec<f64>,
    pub support: Vec<bool>,
}

pub fn gen_regression_data(config: &Config) -> Result<RegressionData> {
    let seed = seed(config)?;
    let n: usize = config.get("n")?;
    let p: usize = config.get("p")?;
    let rho: f64 = config.get("rho")?;
    let snr = config.positive("snr")?;
    let support = parse_support(&config.list::<String>("support")?, p)?;
    let value: f64 = config.get("true_value")?;
    let truth: Vec<f64> = support.iter().map(|&s| if s { value } else { 0.0 }).collect();
    let mut rng = stream_rng(seed, 0);
    let a = gen_toeplitz_design(n, p, rho, &mut rng)?;
    let signal = &a * DVector::from_vec(truth.clone());
    let (b, _) = add_noise_snr(signal.as_slice(), snr, &mut rng)?;
    Ok(RegressionData { a, b: DVector::from_vec(b), truth, support })
}

/// Support size, false positives, normalized error and mean absolute
/// deviation from the truth on the true support.
pub fn support_metrics(x: &[f64], truth: &[f64], support: &[bool], zero_tol: f64) -> (usize, usize, f64, f64) {
    let nonzero = x.iter().filter(|v| v.abs() > zero_tol).count();
    let fp = x
        .iter()
        .zip(support)
        .filter(|(v, &s)| !s && v.abs() > zero_tol)
        .count();
    let on: Vec<f64> = x
        .iter()
        .zip(truth)
        .zip(support)
        .filter(|(_, &s)| s)
        .map(|((v, t), _)| (v - t).abs())
        .collect();
    let mad = on.iter().sum::<f64>() / on.len().max(1) as f64;
    (nonzero, fp, normalized_error(x, truth), mad)
}

pub fn run_regression(config: &Config) -> Result<Report> {
    config.check_known(KNOWN)?;
    let data = gen_regression_data(config)?;
    let strengths: Vec<f64> = config.list("strengths")?;
    let gamma = config.positive("smcp.gamma")?;
    let opts = SolverOptions {
        tol: config.get_or("tol", 1e-8)?,
        max_iter: config.get_or("max_iter", 20_000)?,
        accelerated: config.bool_or("accelerated", true)?,
        ..Default::default()
    };
    let zero_tol: f64 = config.get_or("zero_tol", 1e-8)?;
    let p = data.truth.len();
    let families = [
        ("slope", PenaltyFamily::L1),
        ("smcp", PenaltyFamily::mcp(gamma)?),
        ("lhalf", PenaltyFamily::Lq { q: 0.5 }),
    ];

    let solve = |family: PenaltyFamily, r: f64, x0: Option<DVector<f64>>| -> Result<SolverOutput> {
        let pen = SortedPenalty::new(family, power_increment_weights(p, r, 2.0 / 3.0), 1.0)?;
        let inst = ProblemInstance::new(data.a.clone(), data.b.clone(), Datafit::LeastSquares, pen)?;
        pgd(&inst, &SolverOptions { x0, ..opts.clone() })
    };
    // per strength: SLOPE first, then the nonconvex penalties from its solution
    let results: Vec<Vec<SolverOutput>> = strengths
        .par_iter()
        .map(|&r| {
            let slope = solve(families[0].1, r, None)?;
            let mut out = vec![slope.clone()];
            for &(_, fam) in &families[1..] {
                out.push(solve(fam, r, Some(slope.x.clone()))?);
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;

    let mut runs = Table::new(
        "regression",
        &["penalty", "r", "support_size", "false_positives", "normalized_error", "mad_on_support", "objective", "iterations", "converged"],
    );
    let mut coefs = Table::new("coefficients", &["penalty", "r", "index", "value", "truth"]);
    for (k, (name, _)) in families.iter().enumerate() {
        for (&r, res) in strengths.iter().zip(&results) {
            let out = &res[k];
            let x = out.x.as_slice();
            let (size, fp, err, mad) = support_metrics(x, &data.truth, &data.support, zero_tol);
            runs.push(vec![
                (*name).into(),
                r.into(),
                size.into(),
                fp.into(),
                err.into(),
                mad.into(),
                out.trace.last_objective().unwrap_or(f64::NAN).into(),
                out.iterations.into(),
                out.converged.into(),
            ]);
            for (i, (&v, &t)) in x.iter().zip(&data.truth).enumerate() {
                coefs.push(vec![(*name).into(), r.into(), i.into(), v.into(), t.into()]);
            }
        }
    }
    Ok(Report { tables: vec![runs, coefs] })
}
