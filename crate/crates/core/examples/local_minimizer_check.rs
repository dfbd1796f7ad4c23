//! Certifying local minimizers of the sorted l_1/2 prox.
//!
//! The PAV output with the largest-local-minimizer pooling is always a local
//! minimizer; the verifier checks the block conditions and explains why a
//! tampered vector is not.
//!
//! Run with `cargo run --example local_minimizer_check`.

use sortedprox::isotonic::{chi, pav, PoolingRule};
use sortedprox::prox::verify_local_minimizer;
use sortedprox::{PenaltyFamily, Result};

fn main() -> Result<()> {
    let half = PenaltyFamily::lq(0.5)?;
    let y = [6.0, 5.8, 5.5, 3.0, 2.9, 1.4, 1.0, 0.2];
    let lams = [2.0, 1.8, 1.6, 1.4, 1.2, 1.0, 0.8, 0.6];

    let x = pav(&y, &lams, PoolingRule::nonconvex_chi(half)?)?.flatten();
    let report = verify_local_minimizer(half, &lams, &y, &x)?;
    println!("PAV output {:?}", x.iter().map(|v| (v * 1e4).round() / 1e4).collect::<Vec<_>>());
    println!("  local minimizer: {}\n", report.is_local_minimizer);

    // values that are not the pooled values of their blocks
    let mut moved = x.clone();
    moved[0] += 0.05;
    moved[1] += 0.05;
    moved[2] += 0.05;
    let report = verify_local_minimizer(half, &lams, &y, &moved)?;
    println!("first three entries shifted up by 0.05");
    println!("  local minimizer: {}", report.is_local_minimizer);
    for v in &report.violations {
        println!("  {v:?}");
    }

    // fusing blocks that PAV kept apart, at the fused block's own pooled value
    let ybar = y[..5].iter().sum::<f64>() / 5.0;
    let lbar = lams[..5].iter().sum::<f64>() / 5.0;
    let value = chi(half, ybar, lbar);
    let mut fused = x.clone();
    fused[..5].fill(value);
    let report = verify_local_minimizer(half, &lams, &y, &fused)?;
    println!("\nfirst five entries fused at their pooled value {value:.4}");
    println!("  local minimizer: {}", report.is_local_minimizer);
    for v in &report.violations {
        println!("  {v:?}");
    }
    Ok(())
}
