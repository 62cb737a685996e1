use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use imaginarity::gaussian::GaussianState;
use imaginarity::states::DensityMatrix;
use imaginarity_cli::audit::{self, Suite, DEFAULT_SEED};
use imaginarity_cli::{
    gaussian_json, gaussian_sweep_csv, measure_json, sweep_csv, CliError, MeasureChoice,
    DEFAULT_GRID,
};

/// Imaginarity measures of quantum states.
///
/// Exit codes: 0 success, 1 audit failure, 2 unreadable or malformed input,
/// 3 input that parses but is not a valid state.
#[derive(Parser)]
#[command(name = "imag", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Measures of a density matrix read from a JSON state file.
    Measure {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "all")]
        measure: MeasureChoice,
        #[arg(long, default_value_t = 0.5)]
        mu: f64,
    },
    /// Tsallis measure of a Gaussian state read from a JSON moments file.
    Gaussian {
        file: PathBuf,
        #[arg(long, default_value_t = 0.5)]
        mu: f64,
    },
    /// CSV sweep over the qubit family (0, y, 0) or over one-mode Gaussian
    /// parameters.
    Sweep {
        /// Axes `name:lo:hi:n` for `y` and `mu`.
        #[arg(long, default_value = DEFAULT_GRID, conflicts_with = "gaussian_grid")]
        grid: String,
        /// Axes `name:lo:hi:n` from `nu`, `zeta`, `theta`, `x2`, `mu`.
        #[arg(long)]
        gaussian_grid: Option<String>,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Seeded property audits; prints one JSON report per suite.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, env = "IMAG_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))
}

fn write_out(text: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Measure { file, measure, mu } => {
            let rho = DensityMatrix::from_json_str(&read(&file)?)?;
            let lines = measure_json(&rho, measure, mu)?;
            write_out(&(lines.join("\n") + "\n"), None)?;
        }
        Command::Gaussian { file, mu } => {
            let g = GaussianState::from_json_str(&read(&file)?)?;
            write_out(&(gaussian_json(&g, mu)? + "\n"), None)?;
        }
        Command::Sweep {
            grid,
            gaussian_grid,
            out,
        } => {
            let text = match gaussian_grid {
                Some(spec) => gaussian_sweep_csv(&spec)?,
                None => sweep_csv(&grid)?,
            };
            write_out(&text, out.as_ref())?;
        }
        Command::Verify {
            suite,
            trials,
            seed,
        } => {
            let reports = audit::run(suite, trials as usize, seed);
            let mut text = String::new();
            for r in &reports {
                text.push_str(&serde_json::to_string(r).expect("serializable report"));
                text.push('\n');
            }
            write_out(&text, None)?;
            return Ok(reports.iter().all(|r| r.passed()));
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("imag: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
