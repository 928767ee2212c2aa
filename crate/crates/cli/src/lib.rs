//! Batch experiment runner over the pressure, suspension, holonomy and
//! disk-expansion libraries.
//!
//! Every subcommand reads one JSON config carrying `"schema": 1`, writes
//! CSV and JSON reports into an output directory and returns a summary.
//! Reports contain no timestamps or host data, so an identical config and
//! seed reproduce byte-identical files. Configuration problems map to exit
//! code 2 and numerical failures or unmet expectations to exit code 3.

pub mod config;
pub mod diskvanish;
mod error;
pub mod holonomy;
pub mod pressure;
pub mod random;
mod report;
pub mod selftest;
pub mod suspension;

use std::path::{Path, PathBuf};

use serde_json::Value;

pub use config::{load_config, parse_config, TableSpec, DEFAULT_SEED, SCHEMA_VERSION};
pub use diskvanish::{run_diskvanish, DiskConfig};
pub use error::{CliError, EXIT_CONFIG, EXIT_NUMERICAL};
pub use holonomy::{run_holonomy, HolonomyConfig};
pub use pressure::{run_pressure, PressureConfig};
pub use report::ReportWriter;
pub use selftest::run_selftest;
pub use suspension::{run_suspension, SuspensionConfig};

/// The experiment to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Pressure,
    Suspension,
    Holonomy,
    Diskvanish,
    Selftest,
}

/// Options shared by every subcommand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOptions {
    /// Path of the JSON config; not needed by `selftest`.
    pub config: Option<PathBuf>,
    /// Directory receiving the reports.
    pub out: PathBuf,
    /// Seed overriding the one in the config.
    pub seed: Option<u64>,
}

/// What a successful run produced.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    /// The main report as JSON.
    pub report: Value,
    /// Files written, in order.
    pub files: Vec<PathBuf>,
}

fn require_config(path: Option<&Path>) -> Result<&Path, CliError> {
    path.ok_or_else(|| CliError::Config("--config is required for this subcommand".into()))
}

fn to_value<T: serde::Serialize>(report: &T) -> Result<Value, CliError> {
    serde_json::to_value(report).map_err(CliError::numerical)
}

/// Loads the config, runs the experiment and writes its reports.
pub fn run(experiment: Experiment, options: &RunOptions) -> Result<RunSummary, CliError> {
    let config = options.config.as_deref();
    let mut out = ReportWriter::new(&options.out)?;
    let report = match experiment {
        Experiment::Pressure => {
            let c: PressureConfig = load_config(require_config(config)?)?;
            to_value(&run_pressure(&c, options.seed, &mut out)?)?
        }
        Experiment::Suspension => {
            let c: SuspensionConfig = load_config(require_config(config)?)?;
            to_value(&run_suspension(&c, options.seed, &mut out)?)?
        }
        Experiment::Holonomy => {
            let c: HolonomyConfig = load_config(require_config(config)?)?;
            to_value(&run_holonomy(&c, options.seed, &mut out)?)?
        }
        Experiment::Diskvanish => {
            let c: DiskConfig = load_config(require_config(config)?)?;
            to_value(&run_diskvanish(&c, &mut out)?)?
        }
        Experiment::Selftest => to_value(&run_selftest(&mut out)?)?,
    };
    Ok(RunSummary {
        report,
        files: out.written().to_vec(),
    })
}
