//! Scenario runner behind the `uav-linkscape` binary: parses a scenario
//! file, evaluates its sweep and writes the curve as CSV.

pub mod config;
pub mod csv;
pub mod error;
mod run;

use std::io::Write;
use std::path::Path;

pub use config::{parse_config, ScenarioConfig};
pub use csv::CsvCurve;
pub use error::{CliError, ConfigError};
pub use run::{evaluate, Overrides};

/// Parses and evaluates the scenario at `path`.
pub fn run_file(path: &Path, overrides: &Overrides) -> Result<CsvCurve, CliError> {
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Config {
        path: shown.clone(),
        source: ConfigError::at(0, e.to_string()),
    })?;
    let cfg = parse_config(&text).map_err(|source| CliError::Config { path: shown, source })?;
    evaluate(&cfg, overrides)
}

/// Writes `curve`, then reports failed rows as a numerical error so the
/// output is never lost.
pub fn emit<W: Write>(curve: &CsvCurve, out: W) -> Result<(), CliError> {
    curve.write_to(out)?;
    match curve.failed_rows() {
        0 => Ok(()),
        failed => Err(CliError::Numerical {
            failed,
            total: curve.rows.len(),
        }),
    }
}
