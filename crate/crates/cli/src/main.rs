//! Command-line front end for the exact stationary gas-dynamics solution
//! families: sample fields to files, run the verification suite, and trace
//! streamlines.
//!
//! Exit codes: 0 all checks pass, 1 a verification tolerance failed,
//! 2 configuration or usage error (with a JSON description on stderr).

mod config;
mod families;
mod output;
mod sample;
mod trace_cmd;
mod verify;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use config::RunConfig;
use families::Family;

#[derive(Debug)]
pub struct CliError {
    pub kind: &'static str,
    pub message: String,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        CliError {
            kind: "config",
            message: message.into(),
        }
    }

    pub fn io(message: impl Into<String>) -> Self {
        CliError {
            kind: "io",
            message: message.into(),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "gasdyn",
    version,
    about = "Exact stationary gas-dynamics solution families: sample, verify, trace"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
enum OutFormat {
    #[default]
    Csv,
    Vtk,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Sample the configured family on its grid and write the field.
    Sample {
        /// Run configuration (JSON).
        #[arg(long)]
        config: PathBuf,
        /// Output file.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: OutFormat,
        /// Worker threads for grid evaluation (default: all cores).
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Regenerate the configured family and run the verification suite.
    Verify {
        #[arg(long)]
        config: PathBuf,
        /// Report file (JSON); written to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
        /// Use the uncorrected (pressure-free) energy-equation variant of
        /// the three-dimensional reduction. Regression use only: the
        /// pressure integral is then not conserved and the run fails.
        #[arg(long)]
        debug_literal_e5: bool,
    },
    /// Trace streamlines from a seeds file (one comma-separated point per
    /// line) and write plot-ready curves.
    Trace {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seeds: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        threads: Option<usize>,
    },
}

fn load_config(path: &Path) -> Result<(RunConfig, serde_json::Value), CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("reading {}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::config(format!("parsing {}: {e}", path.display())))?;
    let config: RunConfig = serde_json::from_value(value.clone())
        .map_err(|e| CliError::config(format!("invalid configuration: {e}")))?;
    config
        .grid
        .validate(config.family.grid_dims())
        .map_err(CliError::config)?;
    Ok((config, value))
}

fn build_family(config: &RunConfig) -> Result<Family, CliError> {
    Family::build(&config.family)
        .map_err(|e| CliError::config(format!("invalid family parameters: {e}")))
}

fn set_threads(threads: Option<usize>) {
    if let Some(n) = threads {
        // Ignore failure: the global pool can only be set once per process.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
}

fn run_sample(
    config_path: &Path,
    out: &Path,
    format: OutFormat,
    threads: Option<usize>,
) -> Result<u8, CliError> {
    set_threads(threads);
    let (config, raw) = load_config(config_path)?;
    let family = build_family(&config)?;
    let rows = sample::sample_rows(&config, &family)?;
    let io_err = |e: std::io::Error| CliError::io(format!("writing {}: {e}", out.display()));
    match format {
        OutFormat::Csv => output::write_sample_csv(out, &rows).map_err(io_err)?,
        OutFormat::Json => output::write_sample_json(out, &rows).map_err(io_err)?,
        OutFormat::Vtk => output::write_sample_vtk(out, &config.grid, &rows).map_err(io_err)?,
    }
    output::write_metadata(
        out,
        "sample",
        &raw,
        serde_json::json!({
            "family": config.family.kind_name(),
            "rows": rows.len(),
            "format": format!("{format:?}").to_lowercase(),
        }),
    )
    .map_err(io_err)?;
    Ok(0)
}

fn run_verify(
    config_path: &Path,
    out: Option<&Path>,
    threads: Option<usize>,
    literal_energy: bool,
) -> Result<u8, CliError> {
    set_threads(threads);
    let (config, raw) = load_config(config_path)?;
    let family = build_family(&config)?;
    let report = verify::run(&config, &family, literal_energy);
    let body = serde_json::to_string_pretty(&report)
        .map_err(|e| CliError::io(format!("encoding report: {e}")))?;
    match out {
        Some(path) => {
            let mut w = BufWriter::new(
                File::create(path)
                    .map_err(|e| CliError::io(format!("writing {}: {e}", path.display())))?,
            );
            writeln!(w, "{body}").map_err(|e| CliError::io(e.to_string()))?;
            output::write_metadata(
                path,
                "verify",
                &raw,
                serde_json::json!({
                    "family": report.family,
                    "pass": report.pass,
                    "literal_energy_form": literal_energy,
                }),
            )
            .map_err(|e| CliError::io(e.to_string()))?;
        }
        None => println!("{body}"),
    }
    Ok(if report.pass { 0 } else { 1 })
}

fn run_trace(
    config_path: &Path,
    seeds_path: &Path,
    out: &Path,
    threads: Option<usize>,
) -> Result<u8, CliError> {
    set_threads(threads);
    let (config, raw) = load_config(config_path)?;
    let family = build_family(&config)?;
    let dims = config.family.grid_dims();
    let seeds = trace_cmd::read_seeds(seeds_path, dims)?;
    let outcome = trace_cmd::trace_all(&config, &family, &seeds);
    trace_cmd::write_curves_csv(out, &outcome, dims)
        .map_err(|e| CliError::io(format!("writing {}: {e}", out.display())))?;
    output::write_metadata(out, "trace", &raw, trace_cmd::metadata(&outcome))
        .map_err(|e| CliError::io(e.to_string()))?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Sample {
            config,
            out,
            format,
            threads,
        } => run_sample(config, out, *format, *threads),
        Command::Verify {
            config,
            out,
            threads,
            debug_literal_e5,
        } => run_verify(config, out.as_deref(), *threads, *debug_literal_e5),
        Command::Trace {
            config,
            seeds,
            out,
            threads,
        } => run_trace(config, seeds, out, *threads),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!(
                "{}",
                serde_json::json!({ "error": e.kind, "message": e.message })
            );
            ExitCode::from(2)
        }
    }
}
