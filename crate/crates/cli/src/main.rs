use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use uav_linkscape::{emit, run_file, CliError, Overrides};

#[derive(Parser)]
#[command(
    name = "uav-linkscape",
    version,
    about = "Outage curves for air-to-ground and air-to-air links"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a scenario file and write its curve as CSV.
    Run {
        config: PathBuf,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        trials: Option<u64>,
        /// Relative tolerance for numerical integration.
        #[arg(long)]
        tolerance: Option<f64>,
    },
}

fn execute(cli: Cli) -> Result<(), CliError> {
    let Command::Run {
        config,
        out,
        seed,
        trials,
        tolerance,
    } = cli.command;
    let curve = run_file(
        &config,
        &Overrides {
            seed,
            trials,
            tolerance,
        },
    )?;
    match out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            let r = emit(&curve, &mut w);
            w.flush()?;
            r
        }
        None => {
            let stdout = io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            let r = emit(&curve, &mut w);
            w.flush()?;
            r
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
