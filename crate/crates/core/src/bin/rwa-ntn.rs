use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rwa_ntn::phy::SimMode;
use rwa_ntn::runner::{self, RunError, RunOptions};

#[derive(Parser)]
#[command(name = "rwa-ntn", version, about = "Rotary-wing aircraft NTN link simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Mc,
    Expected,
}

impl From<Mode> for SimMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Mc => SimMode::Mc,
            Mode::Expected => SimMode::Expected,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario end to end and write its artifacts.
    Run {
        /// Built-in scenario id or path to a scenario JSON file.
        #[arg(long)]
        scenario: String,
        /// Orbit sampling step in seconds.
        #[arg(long, default_value_t = 1.0)]
        step: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "mc")]
        mode: Mode,
        /// Frames per simulation window.
        #[arg(long, default_value_t = 100)]
        frames: u32,
        /// Number of frame windows spread over the flight.
        #[arg(long, default_value_t = 12)]
        windows: u32,
    },
    /// BER and data rate over a CNR grid; CSV on stdout.
    Sweep {
        #[arg(long)]
        scenario: String,
        #[arg(long, allow_hyphen_values = true)]
        cnr_min: f64,
        #[arg(long, allow_hyphen_values = true)]
        cnr_max: f64,
        #[arg(long, default_value_t = 21)]
        points: usize,
        #[arg(long, default_value_t = 100)]
        frames: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "mc")]
        mode: Mode,
    },
    /// Print the built-in scenario catalog as JSON.
    Catalog,
}

fn execute(cli: Cli) -> Result<(), RunError> {
    match cli.command {
        Command::Run { scenario, step, seed, out, mode, frames, windows } => {
            let spec = runner::resolve_scenario(&scenario)?;
            let options = RunOptions { step_s: step, seed, mode: mode.into(), n_frames: frames, windows };
            let artifacts = runner::run(&spec, &options, Some(&out))?;
            println!("{}", serde_json::to_string_pretty(&artifacts.report)?);
        }
        Command::Sweep { scenario, cnr_min, cnr_max, points, frames, seed, mode } => {
            let spec = runner::resolve_scenario(&scenario)?;
            let grid = runner::cnr_grid(cnr_min, cnr_max, points);
            let curve = runner::sweep(&spec, &grid, frames, seed, mode.into(), 1.0)?;
            runner::write_sweep_csv(&curve, std::io::stdout().lock())?;
        }
        Command::Catalog => {
            println!("{}", serde_json::to_string_pretty(&rwa_ntn::scenario::builtin_file())?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
