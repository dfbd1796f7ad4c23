//! Regularization paths on the diabetes data.
//!
//! Prints, along the strength grid, how many coefficients are nonzero and how
//! many distinct magnitudes they take. Sorted penalties fuse coefficients
//! into clusters (fewer distinct magnitudes than nonzeros); Lasso and MCP do
//! not. Pass an output path to also write the full path table as CSV.
//!
//! Run with `cargo run --release --example diabetes_path [out.csv]`.

use std::fs::File;
use std::path::Path;

use sortedprox::experiments::{run, Config, Experiment};
use sortedprox::Result;

fn main() -> Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    let config = Config::from_file(&dir.join("path.conf"))?;
    let report = run(Experiment::Path, &config, &dir)?;
    let runs = report.table("runs").expect("path reports a runs table");

    println!("nonzeros/distinct magnitudes per penalty");
    let names = ["lasso", "mcp", "slope", "smcp", "lhalf"];
    print!("{:>12}", "r");
    for n in names {
        print!("{n:>8}");
    }
    println!();
    let per = runs.rows.len() / names.len();
    for i in (0..per).step_by(4) {
        print!("{:>12.1}", runs.float(i, "r").unwrap_or(f64::NAN));
        for k in 0..names.len() {
            let row = k * per + i;
            let nz = runs.float(row, "nonzeros").unwrap_or(f64::NAN);
            let d = runs.float(row, "distinct_magnitudes").unwrap_or(f64::NAN);
            print!("{:>8}", format!("{nz}/{d}"));
        }
        println!();
    }

    if let Some(out) = std::env::args().nth(1) {
        report.tables[0].write_csv(File::create(&out)?)?;
        println!("\npath written to {out}");
    }
    Ok(())
}
