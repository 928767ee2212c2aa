use pressure_calc::derivative_report;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sft::{DepthKFunction, Sft};
use transfer::{rpf, DEFAULT_MAX_ITER, DEFAULT_TOL};

use crate::config::{check_orders, default_orders, effective_seed, TableSpec, SCHEMA_VERSION};
use crate::random::random_potential_family;
use crate::{CliError, ReportWriter};

/// Configuration of the `pressure` subcommand.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PressureConfig {
    pub schema: u64,
    #[serde(default)]
    pub seed: Option<u64>,
    pub sft: Sft,
    /// The potential; zero at depth 1 when absent.
    #[serde(default)]
    pub potential: Option<TableSpec>,
    /// Number of random one-parameter families around the potential.
    #[serde(default)]
    pub random_families: usize,
    /// Derivative orders to report for each family.
    #[serde(default = "default_orders")]
    pub orders: Vec<usize>,
    /// Power-iteration tolerance override.
    #[serde(default)]
    pub rpf_tol: Option<f64>,
    /// Power-iteration step cap override.
    #[serde(default)]
    pub max_iter: Option<usize>,
}

/// One derivative of one random family against its finite-difference oracle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivativeRow {
    pub family: usize,
    pub order: usize,
    pub value: f64,
    pub oracle_value: f64,
    pub abs_err: f64,
    #[serde(rename = "truncation_N")]
    pub truncation_n: usize,
    pub tail_bound: f64,
}

/// Contents of `pressure.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PressureReport {
    pub schema: u64,
    pub seed: u64,
    pub alphabet_size: usize,
    pub potential_depth: usize,
    pub pressure: f64,
    pub rho: f64,
    pub rpf_residual: f64,
    pub gap_estimate: f64,
    pub iterations: usize,
    pub derivatives: Vec<DerivativeRow>,
}

/// Computes the pressure of the configured potential and the derivatives of
/// seeded random families; writes `pressure.json` and `derivatives.csv`.
pub fn run_pressure(config: &PressureConfig, seed: Option<u64>, out: &mut ReportWriter) -> Result<PressureReport, CliError> {
    check_orders(&config.orders)?;
    let seed = effective_seed(seed, config.seed);
    let potential = match &config.potential {
        Some(spec) => spec.build(&config.sft)?,
        None => DepthKFunction::on(&config.sft, 1, |_| 0.0).map_err(CliError::config)?,
    };
    let tol = config.rpf_tol.unwrap_or(DEFAULT_TOL);
    let max_iter = config.max_iter.unwrap_or(DEFAULT_MAX_ITER);
    let data = rpf(&potential, tol, max_iter).map_err(CliError::numerical)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut derivatives = Vec::new();
    for family in 0..config.random_families {
        let fam = random_potential_family(&potential, &mut rng)?
            .to_family()
            .map_err(CliError::numerical)?;
        for &order in &config.orders {
            let r = derivative_report(&fam, order).map_err(CliError::numerical)?;
            derivatives.push(DerivativeRow {
                family,
                order,
                value: r.value,
                oracle_value: r.oracle_value,
                abs_err: r.abs_err,
                truncation_n: r.truncation_n,
                tail_bound: r.tail_bound,
            });
        }
    }
    let report = PressureReport {
        schema: SCHEMA_VERSION,
        seed,
        alphabet_size: config.sft.alphabet_size(),
        potential_depth: potential.depth(),
        pressure: data.pressure,
        rho: data.rho,
        rpf_residual: data.residual,
        gap_estimate: data.gap_estimate,
        iterations: data.iterations,
        derivatives,
    };
    out.json("pressure.json", &report)?;
    out.csv("derivatives.csv", &report.derivatives)?;
    Ok(report)
}
