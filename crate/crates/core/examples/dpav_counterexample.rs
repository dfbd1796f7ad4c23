//! Why plain PAV is not enough for nonconvex sorted penalties.
//!
//! With sorted l_1/2 and unit weights, an entry between the local threshold
//! tau(1) ~ 1.19 and the jump threshold T(1) = 1.5 has two local minimizers:
//! 0 and the nonzero branch. PAV with the largest-local-minimizer pooling
//! keeps the nonzero branch, which is a local minimizer but not a global one.
//! D-PAV also tries zeroing every tail and finds the better candidate.
//!
//! Run with `cargo run --example dpav_counterexample`.

use sortedprox::isotonic::{pav, PoolingRule};
use sortedprox::oracle::exhaustive_partition_prox;
use sortedprox::prox::{dpav, sorted_objective, verify_local_minimizer};
use sortedprox::{PenaltyFamily, Result};

fn main() -> Result<()> {
    let half = PenaltyFamily::lq(0.5)?;
    let y = [3.0, 1.3];
    let lams = [1.0, 1.0];
    println!("tau(1) = {:.6}, T(1) = {:.6}", half.local_threshold(1.0)?, half.global_threshold(1.0)?);
    println!("y = {y:?}, lam = {lams:?}\n");

    let plain = pav(&y, &lams, PoolingRule::nonconvex_chi(half)?)?.flatten();
    let d = dpav(half, &lams, &y)?;
    let oracle = exhaustive_partition_prox(half, &lams, &y, 1.0)?;

    for (name, x) in [("PAV", &plain), ("D-PAV", &d.x), ("exhaustive", &oracle.argmin)] {
        let local = verify_local_minimizer(half, &lams, &y, x)?.is_local_minimizer;
        println!(
            "{name:<11} x = [{:.6}, {:.6}]  objective {:.6}  local minimizer: {local}",
            x[0],
            x[1],
            sorted_objective(half, &lams, 1.0, &y, x)
        );
    }
    println!("\nD-PAV winning prefix: {:?}", d.dpav_winner_index);
    Ok(())
}
