//! Scalar thresholds and the scalar prox of each penalty family.
//!
//! Run with `cargo run --example scalar_prox`.

use sortedprox::{PenaltyFamily, Result};

fn main() -> Result<()> {
    let families = [
        ("l1", PenaltyFamily::L1),
        ("mcp(3)", PenaltyFamily::mcp(3.0)?),
        ("scad(3.7)", PenaltyFamily::scad(3.7)?),
        ("log-sum(0.5)", PenaltyFamily::log_sum(0.5)?),
        ("l_1/2", PenaltyFamily::lq(0.5)?),
        ("l_0.3", PenaltyFamily::lq(0.3)?),
    ];
    let lam = 1.0;

    println!("thresholds at lam = {lam}");
    println!("{:<14}{:>12}{:>12}{:>12}", "family", "m", "tau", "T");
    for (name, fam) in &families {
        if fam.is_nonconvex_at(lam) {
            println!(
                "{name:<14}{:>12.6}{:>12.6}{:>12.6}",
                fam.concavity_boundary(lam)?,
                fam.local_threshold(lam)?,
                fam.global_threshold(lam)?
            );
        } else {
            println!("{name:<14}{:>36}", "(convex scalar problem)");
        }
    }

    let ys = [0.5, 1.0, 1.2, 1.5, 2.0, 4.0];
    println!("\nscalar prox at lam = {lam}");
    print!("{:<14}", "y");
    for y in ys {
        print!("{y:>10}");
    }
    println!();
    for (name, fam) in &families {
        print!("{name:<14}");
        for y in ys {
            let r = fam.scalar_prox(y, lam);
            let mark = if r.tied { "*" } else { " " };
            print!("{:>9.4}{mark}", r.value);
        }
        println!();
    }
    println!("(* = 0 attains the same objective)");

    // the l_1/2 jump: 0 and 1 are both global minimizers at y = T(1) = 1.5
    let half = PenaltyFamily::lq(0.5)?;
    println!(
        "\nl_1/2 at y = 1.5: F(0) = {}, F(1) = {}",
        half.scalar_objective(0.0, 1.5, 1.0),
        half.scalar_objective(1.0, 1.5, 1.0)
    );
    Ok(())
}
