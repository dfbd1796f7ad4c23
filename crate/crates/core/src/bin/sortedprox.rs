use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;

use sortedprox::experiments::{run, Config, Experiment, Format, Report};
use sortedprox::Result;

/// Run a sorted-penalty experiment and write its result tables.
///
/// The main table goes to `--out` (or stdout); further tables are written
/// next to it as `<stem>.<table>.<ext>` (or to stderr without `--out`).
#[derive(Debug, Parser)]
#[command(name = "sortedprox", version)]
struct Cli {
    /// denoising, regression, path, mm-compare, dpav-stress or prox-check
    experiment: String,
    /// Flat `key = value` configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Overrides the `seed` key.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    format: String,
}

fn side_path(out: &Path, table: &str, ext: &str) -> PathBuf {
    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    out.with_file_name(format!("{stem}.{table}.{ext}"))
}

fn write_report(report: &Report, out: Option<&Path>, format: Format) -> Result<()> {
    let ext = match format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    for (i, table) in report.tables.iter().enumerate() {
        match out {
            Some(path) => {
                let path = if i == 0 { path.to_path_buf() } else { side_path(path, &table.name, ext) };
                let mut w = BufWriter::new(File::create(&path)?);
                table.write(&mut w, format)?;
                w.flush()?;
            }
            None if i == 0 => table.write(io::stdout().lock(), format)?,
            None => {
                let mut err = io::stderr().lock();
                writeln!(err, "# {}", table.name)?;
                table.write(&mut err, format)?;
            }
        }
    }
    Ok(())
}

fn main_inner(cli: Cli) -> Result<()> {
    let experiment: Experiment = cli.experiment.parse()?;
    let format: Format = cli.format.parse()?;
    let mut config = Config::from_file(&cli.config)?;
    if let Some(seed) = cli.seed {
        config.set("seed", seed);
    }
    let base = cli.config.parent().unwrap_or(Path::new("."));
    let report = run(experiment, &config, base)?;
    write_report(&report, cli.out.as_deref(), format)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match main_inner(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
