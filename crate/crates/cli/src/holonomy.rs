use holonomy::{
    connection_matrix, eigenvalue_derivative_fd, eta_cc, fundamental_solution, second_variation_trace_cc,
    shooting_deviation, sorted_eigenvalues, trace_derivative, variation_ode_closed_form, BaseFrame,
    ConnectionFamily, Direction, HolonomyError, OrbitData, OrbitSpec, Sampler, DEFAULT_STEPS, FD_STEP,
    SIMPSON_PANELS,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::{effective_seed, SCHEMA_VERSION};
use crate::random::random_orbit;
use crate::{CliError, ReportWriter};

/// RK4 steps used by the shooting comparison.
pub const SHOOTING_STEPS: usize = 4096;
/// Cells used when sampling the ODE residual of a closed form.
pub const RESIDUAL_CELLS: usize = 32;

/// Which connection direction drives the one-parameter family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Perturbation {
    /// The cubic direction built from `q_beta`.
    Cubic,
    /// The quadratic direction built from `q_i`.
    Quadratic,
    /// The sum of both.
    #[default]
    Both,
    /// No perturbation; every derivative is zero.
    Zero,
}

/// Seeded random orbits with lengths uniform in `[l_min, l_max)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomOrbits {
    pub count: usize,
    pub l_min: f64,
    pub l_max: f64,
}

fn default_true() -> bool {
    true
}

fn default_eta_cutoff() -> f64 {
    30.0
}

/// Configuration of the `holonomy` subcommand.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HolonomyConfig {
    pub schema: u64,
    #[serde(default)]
    pub seed: Option<u64>,
    /// Explicit orbits, processed first.
    #[serde(default)]
    pub orbits: Vec<OrbitSpec>,
    /// Random orbits appended after the explicit ones.
    #[serde(default)]
    pub random_orbits: Option<RandomOrbits>,
    #[serde(default)]
    pub perturbation: Perturbation,
    /// Whether to emit the variation ODE table.
    #[serde(default = "default_true")]
    pub variation: bool,
    /// Cutoff `T` of the truncated η integral.
    #[serde(default = "default_eta_cutoff")]
    pub eta_cutoff: f64,
}

/// One row of `holonomy.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HolonomyRow {
    pub orbit: usize,
    pub l: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda3: f64,
    pub trace_re: f64,
    pub trace_im: f64,
    pub fd_re: f64,
    pub fd_im: f64,
    pub abs_err: f64,
}

/// One row of `variation.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariationRow {
    pub orbit: usize,
    pub l: f64,
    pub direction: Direction,
    pub i: usize,
    pub ode_residual: f64,
    pub orthogonality: f64,
    pub monodromy: f64,
    pub shooting_dev: f64,
    pub lambda_prime_dev: f64,
}

/// Per-orbit entry of `holonomy.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitReport {
    pub orbit: usize,
    pub spec: OrbitSpec,
    pub row: HolonomyRow,
    /// `Tr(∂_u D ∂_v π)` at the base point for the cubic pair.
    pub psi: f64,
    /// The truncated η integral and its tail bound.
    pub eta: f64,
    pub eta_bound: f64,
}

/// Contents of `holonomy.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HolonomyReport {
    pub schema: u64,
    pub seed: u64,
    pub perturbation: Perturbation,
    pub orbits: Vec<OrbitReport>,
    pub variation: Vec<VariationRow>,
}

fn numerical(e: HolonomyError) -> CliError {
    CliError::numerical(e)
}

/// Eigenvalues of the monodromy of the base connection over length `l`,
/// in decreasing order.
pub fn base_monodromy_eigenvalues(l: f64) -> Result<[f64; 3], CliError> {
    BaseFrame::new(l).map_err(numerical)?;
    let m = connection_matrix();
    let phi = fundamental_solution(&|_| m, l, DEFAULT_STEPS).map_err(numerical)?;
    let ev = sorted_eigenvalues(&phi.value).map_err(numerical)?;
    Ok(ev.map(|z| z.re))
}

fn family_for(orbit: &OrbitData, perturbation: Perturbation) -> Result<ConnectionFamily, HolonomyError> {
    let l = orbit.length();
    match perturbation {
        Perturbation::Cubic => ConnectionFamily::cubic(l, orbit.q_beta.clone()),
        Perturbation::Quadratic => ConnectionFamily::quadratic(l, orbit.q_i.clone()),
        Perturbation::Both => {
            ConnectionFamily::cubic(l, orbit.q_beta.clone())?.plus(&ConnectionFamily::quadratic(l, orbit.q_i.clone())?)
        }
        Perturbation::Zero => ConnectionFamily::cubic(l, Sampler::zero()),
    }
}

/// Compares the trace formula with finite differences of the top
/// eigenvalue on every orbit and checks the variation closed forms; writes
/// `holonomy.csv`, `variation.csv` and `holonomy.json`.
pub fn run_holonomy(config: &HolonomyConfig, seed: Option<u64>, out: &mut ReportWriter) -> Result<HolonomyReport, CliError> {
    let seed = effective_seed(seed, config.seed);
    let mut orbits = config
        .orbits
        .iter()
        .map(|spec| OrbitData::from_spec(spec).map_err(CliError::config))
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(r) = config.random_orbits {
        if !(0.0 < r.l_min && r.l_min < r.l_max && r.l_max.is_finite()) {
            return Err(CliError::Config(format!("random orbit lengths [{}, {})", r.l_min, r.l_max)));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..r.count {
            let l = rng.gen_range(r.l_min..r.l_max);
            orbits.push(random_orbit(&mut rng, l)?);
        }
    }
    let mut reports = Vec::new();
    let mut variation = Vec::new();
    for (index, orbit) in orbits.iter().enumerate() {
        let l = orbit.length();
        let [lambda1, lambda2, lambda3] = base_monodromy_eigenvalues(l)?;
        let base = BaseFrame::new(l).map_err(numerical)?;
        let fam = family_for(orbit, config.perturbation).map_err(numerical)?;
        let tr = trace_derivative(&fam, &base, SIMPSON_PANELS).map_err(numerical)?;
        let fd = eigenvalue_derivative_fd(&fam, FD_STEP).map_err(numerical)?;
        // Adding zero turns −0.0 into 0.0 so zero columns print uniformly.
        let unsign = |z: Complex64| Complex64::new(z.re + 0.0, z.im + 0.0);
        let (tr, fd) = (unsign(tr), unsign(fd));
        let row = HolonomyRow {
            orbit: index,
            l,
            lambda1,
            lambda2,
            lambda3,
            trace_re: tr.re,
            trace_im: tr.im,
            fd_re: fd.re,
            fd_im: fd.im,
            abs_err: (tr - fd).norm(),
        };
        let eta = eta_cc(&orbit.q_alpha, &orbit.q_beta, config.eta_cutoff).map_err(numerical)?;
        reports.push(OrbitReport {
            orbit: index,
            spec: orbit.to_spec().map_err(numerical)?,
            row,
            psi: second_variation_trace_cc(orbit, 0.0).map_err(numerical)?,
            eta: eta.value,
            eta_bound: eta.truncation_bound,
        });
        if config.variation {
            for direction in [Direction::Cubic, Direction::Quadratic] {
                for i in 1..=3 {
                    let path = variation_ode_closed_form(i, orbit, direction).map_err(numerical)?;
                    let bc = path.boundary_residuals().map_err(numerical)?;
                    let (shooting_dev, lambda_prime_dev) =
                        shooting_deviation(&path, SHOOTING_STEPS).map_err(numerical)?;
                    variation.push(VariationRow {
                        orbit: index,
                        l,
                        direction,
                        i,
                        ode_residual: path.ode_residual(RESIDUAL_CELLS).map_err(numerical)?,
                        orthogonality: bc.orthogonality,
                        monodromy: bc.monodromy,
                        shooting_dev,
                        lambda_prime_dev,
                    });
                }
            }
        }
    }
    let report = HolonomyReport {
        schema: SCHEMA_VERSION,
        seed,
        perturbation: config.perturbation,
        orbits: reports,
        variation,
    };
    let rows: Vec<HolonomyRow> = report.orbits.iter().map(|o| o.row.clone()).collect();
    out.csv("holonomy.csv", &rows)?;
    out.csv("variation.csv", &report.variation)?;
    out.json("holonomy.json", &report)?;
    Ok(report)
}
