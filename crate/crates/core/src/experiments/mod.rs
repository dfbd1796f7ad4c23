//! Experiment harness behind the `sortedprox` binary.
//!
//! Each runner takes a [`Config`], validates it (unknown keys and missing
//! required keys are errors) and returns a [`Report`] made of named tables.
//! Runs are deterministic: every random draw comes from a ChaCha8 substream
//! of the configured seed, and parallel work writes into preallocated slots.

pub mod config;
pub mod data;
pub mod denoising;
pub mod dpav_stress;
pub mod metrics;
pub mod mm_compare;
pub mod path;
pub mod prox_check;
pub mod regression;
pub mod table;

use std::path::Path;
use std::str::FromStr;

pub use config::Config;
pub use table::{Cell, Format, Table};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Denoising,
    Regression,
    Path,
    MmCompare,
    DpavStress,
    ProxCheck,
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "denoising" => Experiment::Denoising,
            "regression" => Experiment::Regression,
            "path" => Experiment::Path,
            "mm-compare" => Experiment::MmCompare,
            "dpav-stress" => Experiment::DpavStress,
            "prox-check" => Experiment::ProxCheck,
            other => return Err(Error::Config(format!("unknown experiment `{other}`"))),
        })
    }
}

/// Named tables; the first one is the main result.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub tables: Vec<Table>,
}

impl Report {
    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }
}

/// Runs `experiment`. Relative paths in the config (the path dataset) are
/// resolved against `base_dir`.
pub fn run(experiment: Experiment, config: &Config, base_dir: &Path) -> Result<Report> {
    match experiment {
        Experiment::Denoising => denoising::run_denoising(config),
        Experiment::Regression => regression::run_regression(config),
        Experiment::Path => {
            let dataset = base_dir.join(config.str("dataset")?);
            path::run_path(config, &dataset)
        }
        Experiment::MmCompare => mm_compare::run_mm_compare(config),
        Experiment::DpavStress => dpav_stress::run_dpav_stress(config),
        Experiment::ProxCheck => prox_check::run_prox_check(config),
    }
}

/// `n` geometrically spaced values from `lo` to `hi`.
pub fn geometric_grid(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi >= lo && n >= 1) {
        return Err(Error::Config(format!("invalid geometric grid [{lo}, {hi}] with {n} points")));
    }
    if n == 1 {
        return Ok(vec![lo]);
    }
    let ratio = (hi / lo).ln() / (n - 1) as f64;
    let mut grid: Vec<f64> = (0..n).map(|k| lo * (ratio * k as f64).exp()).collect();
    grid[n - 1] = hi;
    Ok(grid)
}

/// `lam_i = r (i^a - (i-1)^a)` for `i = 1..=p` (OSCAR-like increments).
pub fn power_increment_weights(p: usize, r: f64, a: f64) -> Vec<f64> {
    (1..=p)
        .map(|i| r * ((i as f64).powf(a) - ((i - 1) as f64).powf(a)))
        .collect()
}

/// `lam_i = r (p - i)^e` for `i = 1..=p`.
pub fn decaying_weights(p: usize, r: f64, e: f64) -> Vec<f64> {
    (1..=p).map(|i| r * ((p - i) as f64).powf(e)).collect()
}

/// Seed shared by all runners.
pub(crate) fn seed(config: &Config) -> Result<u64> {
    config.get("seed")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids_and_weights() {
        let g = geometric_grid(1.0, 100.0, 3).unwrap();
        assert!((g[1] - 10.0).abs() < 1e-12 && (g[2] - 100.0).abs() < 1e-12);
        assert!(geometric_grid(0.0, 1.0, 3).is_err());
        let w = power_increment_weights(3, 2.0, 2.0 / 3.0);
        assert_eq!(w[0], 2.0);
        assert!(w.windows(2).all(|p| p[0] >= p[1]));
        assert_eq!(decaying_weights(28, 1.0, 1.0)[27], 0.0);
        assert_eq!(decaying_weights(28, 1.0, 1.0)[0], 27.0);
        assert!("bogus".parse::<Experiment>().is_err());
    }
}
