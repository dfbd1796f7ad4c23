//! Stress tests of D-PAV on sorted l_1/2.
//!
//! Random mode compares D-PAV with an exhaustive search over all block
//! partitions (p = 10). Adversarial mode builds 22-dimensional instances
//! around pairs of correctly ordered blocks whose merge could in principle
//! be better, and compares D-PAV with that forced merge.
//!
//! Run with `cargo run --release --example dpav_stress`.

use std::path::Path;

use sortedprox::experiments::{run, Config, Experiment};
use sortedprox::Result;

fn main() -> Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    let config = Config::from_file(&dir.join("dpav_stress.conf"))?;
    let report = run(Experiment::DpavStress, &config, &dir)?;

    let random = report.table("random").expect("random table");
    let mut max_gap: f64 = 0.0;
    let mut pav_worse = 0;
    for row in 0..random.rows.len() {
        max_gap = max_gap.max(random.float(row, "gap").unwrap_or(f64::NAN));
        if random.float(row, "pav_objective") > random.float(row, "dpav_objective") {
            pav_worse += 1;
        }
    }
    println!("random mode: {} instances", random.rows.len());
    println!("  max gap D-PAV - exhaustive: {max_gap:e}");
    println!("  plain PAV strictly worse on {pav_worse} instances");

    let adv = report.table("adversarial").expect("adversarial table");
    println!("\nadversarial mode");
    println!("{:>5}{:>8}{:>8}{:>14}{:>14}", "t", "y2/tau", "region", "D-PAV", "forced merge");
    for row in 0..adv.rows.len() {
        println!(
            "{:>5}{:>8}{:>8}{:>14.3}{:>14.3}",
            adv.float(row, "t").unwrap_or(f64::NAN),
            adv.float(row, "y2_multiple").unwrap_or(f64::NAN),
            adv.float(row, "region_size").unwrap_or(f64::NAN),
            adv.float(row, "dpav_objective").unwrap_or(f64::NAN),
            adv.float(row, "forced_objective").unwrap_or(f64::NAN),
        );
    }
    Ok(())
}
