use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use arm_core::spectra::emit::render;
use arm_core::{co2_preset, emit, run_scan, verify, Error, OutputFormat, ScanConfig, SpectrumRecord};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "arm-ionize",
    version,
    about = "Strong-field ionization spectra from the analytical R-matrix method"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the amplitudes described by a TOML config on its momentum grid
    Scan {
        #[arg(long)]
        config: PathBuf,
        /// Output file; overrides `output.path`. Without either, writes to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides `output.format`
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// The three CO2 angular-distribution panels as CSV
    Co2 {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the oracle-equivalence suite
    Check,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        }
    }
}

const EXIT_CONFIG: u8 = 1;
const EXIT_NUMERICAL: u8 = 2;

fn write_records(
    records: &[SpectrumRecord],
    format: OutputFormat,
    out: Option<PathBuf>,
) -> anyhow::Result<()> {
    match out {
        Some(path) => emit(records, format, &path).with_context(|| format!("writing {}", path.display())),
        None => {
            let text = render(records, format)?;
            std::io::stdout().lock().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn report_failed_points(records: &[SpectrumRecord]) {
    let failed = records
        .iter()
        .filter(|r| r.channel_tag.contains("#error:"))
        .count();
    if failed > 0 {
        eprintln!(
            "warning: {failed} of {} records failed and were written as NaN",
            records.len()
        );
    }
}

fn scan(config: PathBuf, out: Option<PathBuf>, format: Option<Format>) -> anyhow::Result<ExitCode> {
    let cfg = ScanConfig::load(&config).with_context(|| format!("loading {}", config.display()))?;
    let format = format.map_or(cfg.output.format, OutputFormat::from);
    let out = out.or_else(|| cfg.output.path.as_ref().map(PathBuf::from));
    let records = run_scan(&cfg)?;
    report_failed_points(&records);
    write_records(&records, format, out)?;
    Ok(ExitCode::SUCCESS)
}

fn co2(out: Option<PathBuf>) -> anyhow::Result<ExitCode> {
    let records = run_scan(&co2_preset())?;
    write_records(&records, OutputFormat::Csv, out)?;
    Ok(ExitCode::SUCCESS)
}

fn check() -> ExitCode {
    let outcomes = verify::run_all();
    let width = outcomes.iter().map(|o| o.name.len()).max().unwrap_or(0);
    for o in &outcomes {
        let status = if o.passed { "PASS" } else { "FAIL" };
        println!("{status}  {:<width$}  {}", o.name, o.detail);
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    println!("{} of {} checks passed", outcomes.len() - failed, outcomes.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_NUMERICAL)
    }
}

fn exit_code_for(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::Config(_) | Error::Io(_)) => EXIT_CONFIG,
        _ => EXIT_NUMERICAL,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Scan { config, out, format } => scan(config, out, format),
        Command::Co2 { out } => co2(out),
        Command::Check => Ok(check()),
    };
    result.unwrap_or_else(|err| {
        eprintln!("error: {err:#}");
        ExitCode::from(exit_code_for(&err))
    })
}
