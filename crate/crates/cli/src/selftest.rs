use std::f64::consts::PI;

use disk_expansions::{build_relations, solve_vanishing, CaseTag, Convention, DifferentialExpansion, VerdictKind};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sft::{DepthKFunction, Sft};

use crate::config::SCHEMA_VERSION;
use crate::holonomy::base_monodromy_eigenvalues;
use crate::{CliError, ReportWriter};

/// Outcome of one built-in check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelfCheck {
    pub name: String,
    pub passed: bool,
    /// Observed error, or `0` for yes/no checks.
    pub error: f64,
    pub tolerance: f64,
}

/// Contents of `selftest.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelftestReport {
    pub schema: u64,
    pub checks: Vec<SelfCheck>,
}

fn check(name: &str, error: f64, tolerance: f64) -> SelfCheck {
    SelfCheck {
        name: name.into(),
        passed: error <= tolerance,
        error,
        tolerance,
    }
}

fn zero_pressure(sft: &Sft) -> Result<f64, CliError> {
    let f = DepthKFunction::on(sft, 1, |_| 0.0).map_err(CliError::numerical)?;
    transfer::pressure(&f).map_err(CliError::numerical)
}

fn theta_average(es: [&DifferentialExpansion; 3], t: f64, s: f64) -> f64 {
    let points = 64;
    (0..points)
        .map(|k| {
            let theta = 2.0 * PI * k as f64 / points as f64;
            es[0].eval_on_flow(0.0, theta).re * es[1].eval_on_flow(t, theta).re * es[2].eval_on_flow(s, theta).re
        })
        .sum::<f64>()
        / points as f64
}

/// Runs a fixed set of quick checks against closed forms; writes
/// `selftest.json` and fails with a numerical error if any check fails.
pub fn run_selftest(out: &mut ReportWriter) -> Result<SelftestReport, CliError> {
    let mut checks = Vec::new();

    let full = Sft::full_shift(2).map_err(CliError::numerical)?;
    checks.push(check("full 2-shift pressure is log 2", (zero_pressure(&full)? - 2f64.ln()).abs(), 1e-12));
    let golden = ((1.0 + 5f64.sqrt()) / 2.0).ln();
    checks.push(check(
        "golden-mean pressure is log of the golden ratio",
        (zero_pressure(&Sft::golden_mean())? - golden).abs(),
        1e-10,
    ));

    let l = 1.3;
    let ev = base_monodromy_eigenvalues(l)?;
    let want = [l.exp(), 1.0, (-l).exp()];
    let err = ev.iter().zip(want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    checks.push(check("base monodromy eigenvalues", err, 1e-10));

    let system = build_relations(CaseTag::AB, 12, &CaseTag::AB.default_couplings(), Convention::Sum)
        .map_err(CliError::numerical)?;
    let forced = solve_vanishing(&system, 2).verdict == VerdictKind::ForcedZero;
    checks.push(SelfCheck {
        name: "AB recursion is forced-zero at N = 12".into(),
        passed: forced,
        error: if forced { 0.0 } else { 1.0 },
        tolerance: 0.0,
    });

    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut expansion = |degree| {
        let coeffs = (0..=8)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        DifferentialExpansion::new(degree, coeffs).map_err(CliError::numerical)
    };
    let [d1, d2, d3] = CaseTag::GH.degrees();
    let es = [expansion(d1)?, expansion(d2)?, expansion(d3)?];
    let series = CaseTag::GH.reduce(&es[0], &es[1], &es[2]).map_err(CliError::numerical)?;
    let (t, s) = (0.3f64.atanh(), 0.5f64.atanh());
    let err = (series.eval(t, s) - theta_average([&es[0], &es[1], &es[2]], t, s)).abs();
    checks.push(check("angular reduction matches θ-quadrature", err, 1e-10));

    let report = SelftestReport {
        schema: SCHEMA_VERSION,
        checks,
    };
    out.json("selftest.json", &report)?;
    let failed: Vec<&str> = report.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    if !failed.is_empty() {
        return Err(CliError::Numerical(format!("self-test failed: {}", failed.join("; "))));
    }
    Ok(report)
}
