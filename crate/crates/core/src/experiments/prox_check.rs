//! Random comparisons of the vector prox with the exhaustive oracle.
//!
//! For each family, draws `instances` sorted inputs of dimension up to
//! `p_max` with weights scaled by `lam_scale`, and reports the largest and
//! smallest objective gap (prox minus oracle).
//!
//! Keys: `seed`, `instances`, `p_max` (required, `p_max <= 12`); `gamma` (2),
//! `eps` (1), `lam_scale` (1), `y_scale` (5).

use rand::Rng;

use super::data::stream_rng;
use super::{seed, Config, Report, Table};
use crate::error::Result;
use crate::oracle::exhaustive_partition_prox;
use crate::penalty::PenaltyFamily;
use crate::prox::{prox, reduce, SortedPenalty};

const KNOWN: &[&str] = &["seed", "instances", "p_max", "gamma", "eps", "lam_scale", "y_scale"];

pub fn run_prox_check(config: &Config) -> Result<Report> {
    config.check_known(KNOWN)?;
    let seed = seed(config)?;
    let instances: usize = config.get("instances")?;
    let p_max: usize = config.get("p_max")?;
    let gamma: f64 = config.get_or("gamma", 2.0)?;
    let eps: f64 = config.get_or("eps", 1.0)?;
    let lam_scale: f64 = config.get_or("lam_scale", 1.0)?;
    let y_scale: f64 = config.get_or("y_scale", 5.0)?;
    let families = [
        ("slope", PenaltyFamily::L1),
        ("smcp", PenaltyFamily::mcp(gamma)?),
        ("scad", PenaltyFamily::scad(gamma.max(2.5))?),
        ("slogsum", PenaltyFamily::log_sum(eps)?),
        ("lhalf", PenaltyFamily::Lq { q: 0.5 }),
    ];
    let mut table = Table::new("prox_check", &["penalty", "instances", "max_gap", "min_gap", "dpav_runs"]);
    for (fi, (name, family)) in families.iter().enumerate() {
        let (mut max_gap, mut min_gap, mut dpav_runs) = (f64::NEG_INFINITY, f64::INFINITY, 0usize);
        for k in 0..instances {
            let mut rng = stream_rng(seed, (fi * instances + k) as u64);
            let p = rng.random_range(1..=p_max);
            let y: Vec<f64> = (0..p).map(|_| y_scale * (2.0 * rng.random::<f64>() - 1.0)).collect();
            let mut lams: Vec<f64> = (0..p).map(|_| lam_scale * rng.random::<f64>()).collect();
            lams.sort_by(|a, b| b.total_cmp(a));
            // stepsize inside the weakly convex regime when there is one
            let mu = family.weak_convexity_modulus(lams[0]);
            let eta = if mu.is_finite() && mu > 0.0 { 0.9 / mu } else { 1.0 };
            let pen = SortedPenalty::new(*family, lams.clone(), eta)?;
            let res = prox(&pen, &y)?;
            dpav_runs += res.dpav_winner_index.is_some() as usize;
            let oracle = exhaustive_partition_prox(*family, &lams, &reduce(&y)?.y_sorted, eta)?;
            let gap = res.objective - oracle.objective;
            max_gap = max_gap.max(gap);
            min_gap = min_gap.min(gap);
        }
        table.push(vec![(*name).into(), instances.into(), max_gap.into(), min_gap.into(), dpav_runs.into()]);
    }
    Ok(Report { tables: vec![table] })
}
