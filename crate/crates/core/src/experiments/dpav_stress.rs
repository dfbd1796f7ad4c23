//! Stress tests of D-PAV with sorted l_1/2.
//!
//! Random mode: `y_i = T(lam_i) + N(noise_mean, noise_std)` with linearly
//! decreasing weights, D-PAV compared with the exhaustive partition search.
//!
//! Adversarial mode: for a second block with mean weight 1 and mean value a
//! multiple of `tau(1)`, and a size ratio `t`, scan a grid of first-block
//! means `(y1, lam1)` for points where the pooled values satisfy
//! `chi(B1) >= chi(B2) >= chi(B1 u B2)`, i.e. where PAV never considers
//! merging two correctly ordered blocks although the merge could be better.
//! One such point per cell is expanded into a 22-dimensional instance
//! `y = (y1, y1 x 20(1-t), y2 x 20t, y2/2)`,
//! `lam = (lam1 + 0.1, lam1 x 20(1-t), 1 x 20t, 0)`, and D-PAV is compared
//! with PAV started from the partition that merges the 20 middle entries.
//!
//! Keys: `seed`, `mode` (random, adversarial or both) (required); random:
//! `p` (10), `instances` (10), `noise_mean` (-0.3), `noise_std` (1),
//! `lam_max` (10), `lam_min` (1); adversarial: `t_values` (0.3,0.5,0.7,0.9),
//! `y2_multiples` (5,10,15,20,25), `lam_range` (50,200), `y_range` (0,60),
//! `grid_lam` (151), `grid_y` (241).

use rand::Rng;

use super::data::{standard_normal_vec, stream_rng};
use super::{seed, Config, Report, Table};
use crate::error::{Error, Result};
use crate::isotonic::{chi, pav, pav_from_partition, PoolingRule};
use crate::oracle::exhaustive_partition_prox;
use crate::penalty::PenaltyFamily;
use crate::prox::{dpav, reduce, sorted_objective};

const KNOWN: &[&str] = &[
    "seed", "mode", "p", "instances", "noise_mean", "noise_std", "lam_max", "lam_min", "t_values",
    "y2_multiples", "lam_range", "y_range", "grid_lam", "grid_y",
];

const HALF: PenaltyFamily = PenaltyFamily::Lq { q: 0.5 };

pub fn run_dpav_stress(config: &Config) -> Result<Report> {
    config.check_known(KNOWN)?;
    let mode = config.str("mode")?;
    let mut tables = Vec::new();
    if mode == "random" || mode == "both" {
        tables.push(random_mode(config)?);
    }
    if mode == "adversarial" || mode == "both" {
        tables.push(adversarial_mode(config)?);
    }
    if tables.is_empty() {
        return Err(Error::Config(format!("unknown mode `{mode}`")));
    }
    Ok(Report { tables })
}

fn random_mode(config: &Config) -> Result<Table> {
    let seed = seed(config)?;
    let p: usize = config.get_or("p", 10)?;
    let instances: usize = config.get_or("instances", 10)?;
    let mean: f64 = config.get_or("noise_mean", -0.3)?;
    let std: f64 = config.get_or("noise_std", 1.0)?;
    let lam_max: f64 = config.get_or("lam_max", 10.0)?;
    let lam_min: f64 = config.get_or("lam_min", 1.0)?;
    let lams: Vec<f64> = (0..p)
        .map(|i| if p == 1 { lam_max } else { lam_max + (lam_min - lam_max) * i as f64 / (p - 1) as f64 })
        .collect();
    let mut table = Table::new(
        "random",
        &["instance", "dpav_objective", "oracle_objective", "gap", "pav_objective", "winner_prefix"],
    );
    for k in 0..instances {
        let noise = standard_normal_vec(p, &mut stream_rng(seed, k as u64));
        let y: Vec<f64> = lams
            .iter()
            .zip(&noise)
            .map(|(&l, e)| Ok(HALF.global_threshold(l)? + mean + std * e))
            .collect::<Result<_>>()?;
        let y_sorted = reduce(&y)?.y_sorted;
        let res = dpav(HALF, &lams, &y_sorted)?;
        let oracle = exhaustive_partition_prox(HALF, &lams, &y_sorted, 1.0)?.with_candidate(res.objective);
        let plain = pav(&y_sorted, &lams, PoolingRule::NonconvexChi { family: HALF })?.flatten();
        table.push(vec![
            k.into(),
            res.objective.into(),
            oracle.objective.into(),
            oracle.gap_vs_candidate.unwrap_or(f64::NAN).into(),
            sorted_objective(HALF, &lams, 1.0, &y_sorted, &plain).into(),
            res.dpav_winner_index.unwrap_or(0).into(),
        ]);
    }
    Ok(table)
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
}

fn pair(config: &Config, key: &str, default: [f64; 2]) -> Result<[f64; 2]> {
    if !config.contains(key) {
        return Ok(default);
    }
    match config.list::<f64>(key)?[..] {
        [a, b] if a <= b => Ok([a, b]),
        _ => Err(Error::Config(format!("`{key}` must be `lo, hi`"))),
    }
}

/// Adversarial 22-dimensional instance and its forced initial partition
/// (block ends).
pub fn adversarial_instance(y1: f64, lam1: f64, y2: f64, t: f64) -> (Vec<f64>, Vec<f64>, Vec<usize>) {
    let n2 = (20.0 * t).round() as usize;
    let n1 = 20 - n2;
    let mut y = vec![y1];
    let mut lams = vec![lam1 + 0.1];
    y.extend(std::iter::repeat_n(y1, n1));
    lams.extend(std::iter::repeat_n(lam1, n1));
    y.extend(std::iter::repeat_n(y2, n2));
    lams.extend(std::iter::repeat_n(1.0, n2));
    y.push(y2 / 2.0);
    lams.push(0.0);
    (y, lams, vec![0, 20, 21])
}

fn adversarial_mode(config: &Config) -> Result<Table> {
    let seed = seed(config)?;
    let ts: Vec<f64> = if config.contains("t_values") { config.list("t_values")? } else { vec![0.3, 0.5, 0.7, 0.9] };
    let mults: Vec<f64> = if config.contains("y2_multiples") {
        config.list("y2_multiples")?
    } else {
        vec![5.0, 10.0, 15.0, 20.0, 25.0]
    };
    let [lam_lo, lam_hi] = pair(config, "lam_range", [50.0, 200.0])?;
    let [y_lo, y_hi] = pair(config, "y_range", [0.0, 60.0])?;
    let lam_grid = linspace(lam_lo, lam_hi, config.get_or("grid_lam", 151)?);
    let y_grid = linspace(y_lo, y_hi, config.get_or("grid_y", 241)?);
    let lam2 = 1.0;
    let tau2 = HALF.local_threshold(lam2)?;
    let mut table = Table::new(
        "adversarial",
        &["t", "y2_multiple", "region_size", "y1", "lam1", "dpav_objective", "forced_objective", "dpav_not_worse"],
    );
    for (ci, &mult) in mults.iter().enumerate() {
        for (ti, &t) in ts.iter().enumerate() {
            let y2 = mult * tau2;
            let chi2 = chi(HALF, y2, lam2);
            let mut region = Vec::new();
            for &lam1 in &lam_grid {
                for &y1 in &y_grid {
                    if y1 < y2 || lam1 < lam2 {
                        continue;
                    }
                    let chi1 = chi(HALF, y1, lam1);
                    let merged = chi(HALF, (1.0 - t) * y1 + t * y2, (1.0 - t) * lam1 + t * lam2);
                    if chi1 >= chi2 && chi2 >= merged {
                        region.push((y1, lam1));
                    }
                }
            }
            if region.is_empty() {
                table.push(vec![
                    t.into(), mult.into(), 0usize.into(), f64::NAN.into(), f64::NAN.into(),
                    f64::NAN.into(), f64::NAN.into(), true.into(),
                ]);
                continue;
            }
            let mut rng = stream_rng(seed, (ci * ts.len() + ti) as u64 + 1_000);
            let (y1, lam1) = region[rng.random_range(0..region.len())];
            let (y, lams, ends) = adversarial_instance(y1, lam1, y2, t);
            let res = dpav(HALF, &lams, &y)?;
            let forced = pav_from_partition(&y, &lams, &ends, PoolingRule::NonconvexChi { family: HALF })?.flatten();
            let forced_obj = sorted_objective(HALF, &lams, 1.0, &y, &forced);
            table.push(vec![
                t.into(),
                mult.into(),
                region.len().into(),
                y1.into(),
                lam1.into(),
                res.objective.into(),
                forced_obj.into(),
                (res.objective <= forced_obj).into(),
            ]);
        }
    }
    Ok(table)
}
