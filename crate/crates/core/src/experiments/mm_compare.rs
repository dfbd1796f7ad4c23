//! Direct proximal gradient against the majorization-minimization baseline
//! for sorted MCP, on a least-squares and a logistic problem.
//!
//! `A` has Toeplitz-correlated rows; the truth has `nonzeros` entries split
//! into two clusters at `+cluster_value` and `-cluster_value` at random
//! positions. Least squares uses `b = A x* + noise` at the given SNR; the
//! logistic problem uses `b = sign(A x*)` with a fraction of labels flipped.
//! Weights are `lam_i = alpha (p - i) / p`. Both methods share the stepsize
//! `0.99 min(1/L, gamma)` and the stopping rule.
//!
//! Keys: `seed`, `n`, `p`, `rho`, `nonzeros`, `cluster_value`, `gamma`,
//! `alpha_ls`, `alpha_logistic`, `snr`, `flip_fraction`, `tol` (required);
//! `max_iter` (100000), `accelerated` (false).

use nalgebra::DVector;
use rand::seq::index::sample;

use super::data::{add_noise_snr, gen_toeplitz_design, stream_rng};
use super::{seed, Config, Report, Table};
use crate::error::{Error, Result};
use crate::penalty::PenaltyFamily;
use crate::prox::SortedPenalty;
use crate::solver::{default_stepsize, mm_lca_smcp, pgd, Datafit, ProblemInstance, SolverOptions, SolverOutput};

const KNOWN: &[&str] = &[
    "seed", "n", "p", "rho", "nonzeros", "cluster_value", "gamma", "alpha_ls", "alpha_logistic",
    "snr", "flip_fraction", "tol", "max_iter", "accelerated",
];

/// Both problems of the comparison.
pub struct MmProblems {
    pub least_squares: ProblemInstance,
    pub logistic: ProblemInstance,
    pub truth: Vec<f64>,
}

pub fn gen_mm_problems(config: &Config) -> Result<MmProblems> {
    let seed = seed(config)?;
    let n: usize = config.get("n")?;
    let p: usize = config.get("p")?;
    let rho: f64 = config.get("rho")?;
    let nonzeros: usize = config.get("nonzeros")?;
    let value: f64 = config.get("cluster_value")?;
    let gamma = config.positive("gamma")?;
    let snr = config.positive("snr")?;
    let flip: f64 = config.get("flip_fraction")?;
    if nonzeros > p || !(0.0..=1.0).contains(&flip) {
        return Err(Error::Config("need nonzeros <= p and flip_fraction in [0, 1]".into()));
    }
    let mut rng = stream_rng(seed, 0);
    let a = gen_toeplitz_design(n, p, rho, &mut rng)?;
    let mut truth = vec![0.0; p];
    for (k, idx) in sample(&mut rng, p, nonzeros).into_iter().enumerate() {
        truth[idx] = if k % 2 == 0 { value } else { -value };
    }
    let signal = &a * DVector::from_vec(truth.clone());
    let (b_ls, _) = add_noise_snr(signal.as_slice(), snr, &mut rng)?;
    let mut b_log: Vec<f64> = signal.iter().map(|&v| if v >= 0.0 { 1.0 } else { -1.0 }).collect();
    let flips = (flip * n as f64).round() as usize;
    for idx in sample(&mut rng, n, flips) {
        b_log[idx] = -b_log[idx];
    }
    let weights = |alpha: f64| (1..=p).map(|i| alpha * (p - i) as f64 / p as f64).collect::<Vec<f64>>();
    let family = PenaltyFamily::mcp(gamma)?;
    let ls_pen = SortedPenalty::new(family, weights(config.positive("alpha_ls")?), 1.0)?;
    let log_pen = SortedPenalty::new(family, weights(config.positive("alpha_logistic")?), 1.0)?;
    Ok(MmProblems {
        least_squares: ProblemInstance::new(a.clone(), DVector::from_vec(b_ls), Datafit::LeastSquares, ls_pen)?,
        logistic: ProblemInstance::new(a, DVector::from_vec(b_log), Datafit::Logistic, log_pen)?,
        truth,
    })
}

/// `(direct, mm)` runs with a shared stepsize.
pub fn compare(instance: &ProblemInstance, opts: &SolverOptions) -> Result<(SolverOutput, SolverOutput)> {
    let opts = SolverOptions { eta: Some(opts.eta.unwrap_or_else(|| default_stepsize(instance))), ..opts.clone() };
    Ok((pgd(instance, &opts)?, mm_lca_smcp(instance, &opts)?))
}

pub fn run_mm_compare(config: &Config) -> Result<Report> {
    config.check_known(KNOWN)?;
    let problems = gen_mm_problems(config)?;
    let opts = SolverOptions {
        tol: config.positive("tol")?,
        max_iter: config.get_or("max_iter", 100_000)?,
        accelerated: config.bool_or("accelerated", false)?,
        ..Default::default()
    };
    let mut traces = Table::new("traces", &["datafit", "method", "iteration", "objective"]);
    let mut summary = Table::new("summary", &["datafit", "method", "iterations", "final_objective", "converged", "eta"]);
    for (name, inst) in [("least_squares", &problems.least_squares), ("logistic", &problems.logistic)] {
        let (direct, mm) = compare(inst, &opts)?;
        for (method, out) in [("pgd", &direct), ("mm_lca", &mm)] {
            for rec in &out.trace.records {
                traces.push(vec![
                    name.into(),
                    method.into(),
                    rec.iteration.into(),
                    rec.objective.into(),
                ]);
            }
            summary.push(vec![
                name.into(),
                method.into(),
                out.iterations.into(),
                out.trace.last_objective().unwrap_or(f64::NAN).into(),
                out.converged.into(),
                out.eta.into(),
            ]);
        }
    }
    Ok(Report { tables: vec![summary, traces] })
}
