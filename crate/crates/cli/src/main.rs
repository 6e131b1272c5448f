//! `pmcw`: design, simulate and evaluate cooperative PMCW phase-code pairs.

mod config;
mod run;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::Parser;

use config::{Mode, Overrides, RunConfig};

#[derive(Debug, Parser)]
#[command(
    name = "pmcw",
    version,
    about = "Cooperative PMCW code design and range-Doppler simulation"
)]
struct Cli {
    /// What to run; overrides `mode` in the config file.
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    /// TOML or JSON run configuration (a previous manifest.json also works).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory; must be absent or empty.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed of the random initial code pair.
    #[arg(long)]
    seed: Option<u64>,
    /// Seed of the receiver noise.
    #[arg(long)]
    noise_seed: Option<u64>,
    /// Detection threshold in dB below the map peak.
    #[arg(long, allow_hyphen_values = true)]
    threshold_db: Option<f64>,
    /// Run this many seeds in parallel, one subdirectory each.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    sweep: u64,
}

fn load(path: Option<&Path>) -> Result<(RunConfig, PathBuf)> {
    let Some(path) = path else {
        return Ok((RunConfig::default(), PathBuf::from(".")));
    };
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read config {}", path.display()))?;
    let cfg = config::parse_config(&text, path)?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    Ok((cfg, base))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = load(cli.config.as_deref()).and_then(|(file, base)| {
        let over = Overrides {
            mode: cli.mode,
            out: cli.out.clone(),
            seed: cli.seed,
            noise_seed: cli.noise_seed,
            threshold_db: cli.threshold_db,
        };
        let resolved = config::resolve(file, &base, &over)?;
        run::execute(&resolved, cli.sweep as usize)
    });
    match result {
        Ok(lines) => {
            for line in lines {
                println!("{line}");
            }
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
