//! `msid`: analytic multiscale information dynamics for linear VAR models.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser};

use msid::presets;
use msid::var::VarModel;
use msid_cli::args::{parse_modes, parse_oracle, parse_targets, parse_taus};
use msid_cli::errors::CliError;
use msid_cli::model_file::parse_model;
use msid_cli::run::{execute, Format, RunConfig};

/// Analytic multiscale information dynamics for linear VAR models: storage,
/// transfer, and predictive information across time scales, with an optional
/// simulation-based estimation oracle.
#[derive(Debug, Parser)]
#[command(
    name = "msid",
    version,
    group(ArgGroup::new("model_source").required(true).args(["model", "preset"]))
)]
struct Cli {
    /// Path to a JSON model file {"m", "p", "A", "Sigma"}.
    #[arg(long, value_name = "PATH")]
    model: Option<PathBuf>,

    /// Built-in model preset.
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(presets::NAMES))]
    preset: Option<String>,

    /// Scales: comma-separated integers and inclusive ranges, e.g. "1..20" or "1,2,5..8".
    #[arg(long, default_value = "1", value_name = "LIST")]
    taus: String,

    /// Coarse-graining modes: comma-separated subset of {avg, dws}.
    #[arg(long, default_value = "avg,dws", value_name = "LIST")]
    modes: String,

    /// Target channels (1-based, comma-separated); default: all channels.
    #[arg(long, value_name = "LIST")]
    targets: Option<String>,

    /// Attach simulation-based estimates: "N=...,seed=...,lags=...,ridge=..."
    /// (all keys optional; bare --oracle uses the defaults).
    #[arg(long, value_name = "SETTINGS", num_args = 0..=1, default_missing_value = "")]
    oracle: Option<String>,

    /// Write the table to this path instead of standard output.
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Base seed for the oracle simulation (overridden by seed= in --oracle).
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// On failure, also print a machine-readable error object to stderr.
    #[arg(long)]
    error_json: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let error_json = cli.error_json;
    match real_main(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message());
            if error_json {
                eprintln!("{}", err.to_json());
            }
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

fn real_main(cli: Cli) -> Result<(), CliError> {
    let (model, model_label) = load_model(&cli)?;
    let taus = parse_taus(&cli.taus)?;
    let modes = parse_modes(&cli.modes)?;
    let targets = match &cli.targets {
        Some(text) => parse_targets(text, model.m)?,
        None => (1..=model.m).collect(),
    };
    let oracle = match &cli.oracle {
        Some(text) => Some(parse_oracle(text, cli.seed)?),
        None => None,
    };
    let config = RunConfig {
        model,
        model_label,
        taus,
        modes,
        targets,
        oracle,
        format: cli.format,
    };
    let table = execute(&config)?;
    match &cli.output {
        Some(path) => fs::write(path, table)
            .map_err(|e| CliError::output(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(table.as_bytes())
            .map_err(|e| CliError::output(format!("cannot write to standard output: {e}"))),
    }
}

fn load_model(cli: &Cli) -> Result<(VarModel, String), CliError> {
    if let Some(name) = &cli.preset {
        let model = presets::by_name(name)
            .ok_or_else(|| CliError::usage(format!("unknown preset \"{name}\"")))?;
        return Ok((model, name.clone()));
    }
    let path = cli
        .model
        .as_ref()
        .expect("clap guarantees a model source is present");
    let text = fs::read_to_string(path).map_err(|e| {
        CliError::file_not_found(format!("cannot read model file {}: {e}", path.display()))
    })?;
    let model = parse_model(&text)?;
    let label = path.display().to_string();
    Ok((model, label))
}
