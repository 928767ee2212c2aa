use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sft::{DepthKFunction, Sft};

use crate::CliError;

/// The only configuration schema version understood by this build.
pub const SCHEMA_VERSION: u64 = 1;

/// Seed used when neither the config nor the command line supplies one.
pub const DEFAULT_SEED: u64 = 0;

/// Reads a JSON config, checks `"schema": 1` and deserializes it.
pub fn load_config<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    parse_config(&text)
}

/// Parses a JSON config from text, checking the schema version first.
pub fn parse_config<T: DeserializeOwned>(text: &str) -> Result<T, CliError> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(CliError::config)?;
    match value.get("schema").and_then(serde_json::Value::as_u64) {
        Some(SCHEMA_VERSION) => {}
        Some(v) => return Err(CliError::Config(format!("unsupported schema version {v}"))),
        None => return Err(CliError::Config("missing \"schema\": 1".into())),
    }
    serde_json::from_value(value).map_err(CliError::config)
}

/// The seed in effect: the command line wins over the config.
pub fn effective_seed(cli: Option<u64>, config: Option<u64>) -> u64 {
    cli.or(config).unwrap_or(DEFAULT_SEED)
}

/// A locally constant function given as a `word → value` table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableSpec {
    /// Word length `k`.
    pub depth: usize,
    /// One value per admissible `k`-word, keyed by the word.
    pub values: BTreeMap<String, f64>,
}

impl TableSpec {
    /// Builds the function on `sft`.
    pub fn build(&self, sft: &Sft) -> Result<DepthKFunction<f64>, CliError> {
        DepthKFunction::from_table(sft, self.depth, &self.values).map_err(CliError::config)
    }
}

pub(crate) fn default_orders() -> Vec<usize> {
    vec![1, 2, 3]
}

pub(crate) fn check_orders(orders: &[usize]) -> Result<(), CliError> {
    match orders.iter().find(|&&k| !(1..=3).contains(&k)) {
        Some(k) => Err(CliError::Config(format!("derivative order {k} is not in 1..=3"))),
        None => Ok(()),
    }
}
