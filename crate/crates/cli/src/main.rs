//! mfpe-alloc: run scenario experiments (balance sheets, ruin curves,
//! capital curves, MFPE allocation studies) and write CSV + report files.
//!
//! Exit codes: 0 success, 2 configuration/usage error, 3 solver
//! non-convergence, 4 I/O failure.

mod config;
mod experiments;
mod output;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{ConfigError, ScenarioConfig};
use experiments::{run_experiment, Context, Experiment};

#[derive(Parser)]
#[command(
    name = "mfpe-alloc",
    version,
    about = "Regulatory balance sheets and MFPE asset-allocation studies for a two-line non-life insurer",
    long_about = "Runs Monte Carlo experiments for a two-line insurer: dependent lognormal claims \
                  (Frank copula), a jump-diffusion risky asset next to a riskless bond, French and \
                  Solvency-2-style balance sheets, ruin probabilities and the MFPE allocation optimum.\n\n\
                  Outputs are deterministic for a fixed (config, seed) no matter how many workers run; \
                  set RAYON_NUM_THREADS to cap the worker count."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment (or `all`) and write `<experiment>.csv` /
    /// `<experiment>-report.txt` into the output directory.
    Run {
        /// Scenario file (flat dotted keys; empty file = default scenario).
        #[arg(long)]
        config: PathBuf,
        /// Which experiment to run.
        #[arg(long, value_enum)]
        experiment: Experiment,
        /// Output directory (created if missing).
        #[arg(long)]
        out: PathBuf,
        /// Override simulation.seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override both path counts (curves and final optima).
        #[arg(long)]
        paths: Option<u64>,
        /// Echo the resolved configuration before running.
        #[arg(long)]
        print_effective_config: bool,
    },
    /// Parse and validate a scenario file, reporting every problem at once.
    Validate {
        /// Scenario file to check.
        #[arg(long)]
        config: PathBuf,
        /// Echo the resolved configuration when valid.
        #[arg(long)]
        print_effective_config: bool,
    },
}

#[derive(Debug)]
pub enum CliError {
    Config(Vec<ConfigError>),
    Engine(mfpe_core::Error),
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    fn engine(e: mfpe_core::Error) -> Self {
        CliError::Engine(e)
    }

    fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.to_path_buf(), source }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Engine(_) => 3,
            CliError::Io { .. } => 4,
        }
    }

    fn report(&self) {
        match self {
            CliError::Config(errors) => {
                for e in errors {
                    eprintln!("config error: {e}");
                }
            }
            CliError::Engine(e) => eprintln!("solver error: {e}"),
            CliError::Io { path, source } => eprintln!("io error: {}: {source}", path.display()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            e.report();
            ExitCode::from(e.exit_code())
        }
    }
}

/// Write lines to stdout, stopping quietly if the pipe closes (e.g. `| head`).
fn print_lines<I: IntoIterator<Item = String>>(lines: I) {
    let mut out = std::io::stdout().lock();
    for line in lines {
        if writeln!(out, "{line}").is_err() {
            return;
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run { config, experiment, out, seed, paths, print_effective_config } => {
            let (mut scenario, errors) =
                ScenarioConfig::load(&config).map_err(|e| CliError::io(&config, e))?;
            if !errors.is_empty() {
                return Err(CliError::Config(errors));
            }
            if let Some(seed) = seed {
                scenario.simulation.seed = seed;
            }
            if let Some(paths) = paths {
                if paths == 0 {
                    return Err(CliError::Config(vec![ConfigError {
                        key: "--paths".to_string(),
                        message: "must be >= 1".to_string(),
                        line: None,
                    }]));
                }
                scenario.simulation.n_paths_curve = paths;
                scenario.simulation.n_paths_final = paths;
            }
            if print_effective_config {
                print_lines(scenario.effective_lines());
            }
            let ctx = Context::new(scenario, out);
            run_experiment(&ctx, experiment)
        }
        Command::Validate { config, print_effective_config } => {
            let (scenario, errors) =
                ScenarioConfig::load(&config).map_err(|e| CliError::io(&config, e))?;
            if !errors.is_empty() {
                return Err(CliError::Config(errors));
            }
            let mut lines = vec!["configuration OK".to_string()];
            if print_effective_config {
                lines.extend(scenario.effective_lines());
            }
            print_lines(lines);
            Ok(())
        }
    }
}
