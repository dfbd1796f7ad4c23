//! Vector prox of SLOPE and of nonconvex sorted penalties on the same input.
//!
//! SLOPE shrinks every cluster; sorted MCP leaves large entries untouched and
//! sorted l_1/2 shrinks them less. All three fuse entries of similar
//! magnitude into one block.
//!
//! Run with `cargo run --example slope_prox`.

use sortedprox::{prox, PenaltyFamily, Result, SortedPenalty};

fn show(name: &str, x: &[f64]) {
    let cells: Vec<String> = x.iter().map(|v| format!("{v:7.3}")).collect();
    println!("{name:<8}[{}]", cells.join(","));
}

fn main() -> Result<()> {
    let y = [4.1, -0.3, 3.9, 1.2, -1.0, 0.2, -4.0, 1.1];
    let lams: Vec<f64> = (0..y.len()).map(|i| 1.0 - 0.1 * i as f64).collect();
    show("y", &y);
    show("lam", &lams);
    println!();

    let penalties = [
        ("slope", PenaltyFamily::L1),
        ("smcp", PenaltyFamily::mcp(2.0)?),
        ("sscad", PenaltyFamily::scad(3.0)?),
        ("lhalf", PenaltyFamily::lq(0.5)?),
    ];
    for (name, family) in penalties {
        let pen = SortedPenalty::new(family, lams.clone(), 1.0)?;
        let res = prox(&pen, &y)?;
        show(name, &res.x);
        let how = match res.dpav_winner_index {
            Some(k) => format!("D-PAV, winning prefix {k}"),
            None => "PAV".to_string(),
        };
        println!(
            "{:<8}objective {:.6}, {} blocks, {how}",
            "",
            res.objective,
            res.partition.blocks.len()
        );
    }
    Ok(())
}
