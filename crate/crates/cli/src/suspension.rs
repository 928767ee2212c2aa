use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sft::{Cylinders, Sft};
use suspension::{
    flow_pressure, flow_pressure_derivative_transfer, FiberProfile, FlowFamily, FlowFunction, FlowFunctionSpec,
    FlowPressure, SuspensionFlow,
};

use crate::config::{check_orders, default_orders, effective_seed, TableSpec, SCHEMA_VERSION};
use crate::random::random_flow_function;
use crate::{CliError, ReportWriter};

/// Configuration of the `suspension` subcommand.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuspensionConfig {
    pub schema: u64,
    #[serde(default)]
    pub seed: Option<u64>,
    pub sft: Sft,
    /// The roof function; must be positive.
    pub roof: TableSpec,
    /// The flow function; zero when absent.
    #[serde(default)]
    pub flow_function: Option<FlowFunctionSpec>,
    /// Number of random families `F + s F₁ + s²/2 F₂ + s³/6 F₃`.
    #[serde(default)]
    pub random_families: usize,
    /// Derivative orders to transfer for each family.
    #[serde(default = "default_orders")]
    pub orders: Vec<usize>,
}

/// Flow-side and shift-side derivatives of one family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransferRow {
    pub family: usize,
    pub order: usize,
    pub flow_side: f64,
    pub shift_side: f64,
    pub abs_err: f64,
}

/// Contents of `suspension.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuspensionReport {
    pub schema: u64,
    pub seed: u64,
    pub flow_pressure: FlowPressure,
    pub transfers: Vec<TransferRow>,
}

/// Solves for the flow pressure of the configured function and transfers
/// derivatives of seeded random families; writes `suspension.json` and
/// `transfer.csv`.
pub fn run_suspension(
    config: &SuspensionConfig,
    seed: Option<u64>,
    out: &mut ReportWriter,
) -> Result<SuspensionReport, CliError> {
    check_orders(&config.orders)?;
    let seed = effective_seed(seed, config.seed);
    let flow = SuspensionFlow::new(config.roof.build(&config.sft)?).map_err(CliError::config)?;
    let base = match &config.flow_function {
        Some(spec) => FlowFunction::from_spec(&config.sft, spec).map_err(CliError::config)?,
        None => {
            let cyl = Arc::new(Cylinders::new(&config.sft, 1).map_err(CliError::config)?);
            FlowFunction::uniform(cyl, FiberProfile::constant(0.0)).map_err(CliError::config)?
        }
    };
    let pressure = flow_pressure(&flow, &base).map_err(CliError::numerical)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut transfers = Vec::new();
    for family in 0..config.random_families {
        let mut fam = FlowFamily::new(base.clone());
        for j in 1..=3 {
            let term = random_flow_function(&config.sft, 0.5, &mut rng)?;
            fam = fam.with_term(j, term).map_err(CliError::config)?;
        }
        for &order in &config.orders {
            let pair = flow_pressure_derivative_transfer(&flow, &fam, order).map_err(CliError::numerical)?;
            transfers.push(TransferRow {
                family,
                order,
                flow_side: pair.flow_side,
                shift_side: pair.shift_side,
                abs_err: pair.abs_err,
            });
        }
    }
    let report = SuspensionReport {
        schema: SCHEMA_VERSION,
        seed,
        flow_pressure: pressure,
        transfers,
    };
    out.json("suspension.json", &report)?;
    out.csv("transfer.csv", &report.transfers)?;
    Ok(report)
}
