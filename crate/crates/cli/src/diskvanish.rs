use disk_expansions::{
    build_relations, check_named_relations, solve_vanishing, CaseTag, Convention, Coupling, NamedCheck, Verdict,
    VerdictKind, DEFAULT_MARGIN,
};
use serde::{Deserialize, Serialize};

use crate::config::SCHEMA_VERSION;
use crate::{CliError, ReportWriter};

fn default_margin() -> usize {
    DEFAULT_MARGIN
}

fn default_expect() -> Option<VerdictKind> {
    Some(VerdictKind::ForcedZero)
}

/// One recursion system to build and decide.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseConfig {
    pub case: CaseTag,
    /// Truncation order of the unknowns.
    #[serde(rename = "N")]
    pub order: usize,
    /// Couplings `s = m t`; the case defaults when absent.
    #[serde(default)]
    pub couplings: Option<Vec<Coupling>>,
    #[serde(default)]
    pub convention: Convention,
    /// Expected verdict; `forced-zero` unless stated. `null` records the
    /// verdict without any expectation.
    #[serde(default = "default_expect")]
    pub expect: Option<VerdictKind>,
}

/// Configuration of the `diskvanish` subcommand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiskConfig {
    pub schema: u64,
    /// Unknowns with index above `N − margin` are not tested.
    #[serde(default = "default_margin")]
    pub margin: usize,
    pub cases: Vec<CaseConfig>,
    /// Whether to check the named relations of each case.
    #[serde(default = "default_true")]
    pub named_checks: bool,
}

fn default_true() -> bool {
    true
}

/// Per-case entry of `diskvanish.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseReport {
    /// File holding the relation dump.
    pub relations_file: String,
    pub expect: Option<VerdictKind>,
    /// Whether the verdict equals the expectation; `true` without one.
    pub expectation_met: bool,
    pub verdict: Verdict,
    pub named: Vec<NamedCheck>,
}

/// Contents of `diskvanish.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiskReport {
    pub schema: u64,
    pub margin: usize,
    pub results: Vec<CaseReport>,
}

/// Builds and decides every configured system; writes `diskvanish.json`
/// and one `relations_<position>_<case>.json` dump per system.
///
/// All files are written before an unmet `forced-zero` expectation is
/// reported as an error. An unmet `undetermined` expectation only clears
/// the `expectation_met` flag.
pub fn run_diskvanish(config: &DiskConfig, out: &mut ReportWriter) -> Result<DiskReport, CliError> {
    let mut results = Vec::new();
    for (position, c) in config.cases.iter().enumerate() {
        let couplings = c.couplings.clone().unwrap_or_else(|| c.case.default_couplings());
        let system = build_relations(c.case, c.order, &couplings, c.convention).map_err(CliError::config)?;
        let verdict = solve_vanishing(&system, config.margin);
        let named = if config.named_checks {
            check_named_relations(c.case, c.order).map_err(CliError::config)?
        } else {
            Vec::new()
        };
        let relations_file = format!("relations_{position}_{}.json", c.case);
        out.json(&relations_file, &system.dump())?;
        results.push(CaseReport {
            relations_file,
            expect: c.expect,
            expectation_met: c.expect.map_or(true, |e| e == verdict.verdict),
            verdict,
            named,
        });
    }
    let report = DiskReport {
        schema: SCHEMA_VERSION,
        margin: config.margin,
        results,
    };
    out.json("diskvanish.json", &report)?;
    let unmet: Vec<String> = report
        .results
        .iter()
        .filter(|r| r.expect == Some(VerdictKind::ForcedZero) && r.verdict.verdict != VerdictKind::ForcedZero)
        .map(|r| format!("{} (N = {}, {:?})", r.verdict.case, r.verdict.order, r.verdict.convention))
        .collect();
    if !unmet.is_empty() {
        return Err(CliError::Expectation(format!(
            "expected forced-zero but undetermined: {}",
            unmet.join(", ")
        )));
    }
    Ok(report)
}
