use std::sync::Arc;

use sft::{Cylinders, DepthKFunction, SftError};
use transfer::{normalize_potential, rpf, MarkovMeasure, RuelleMatrix, DEFAULT_MAX_ITER, DEFAULT_TOL};

use crate::PressureError;

/// Target size of the neglected correlation tail, `gapᴺ < TAIL_TARGET`.
const TAIL_TARGET: f64 = 1e-12;
/// Largest truncation order chosen automatically.
const MAX_TRUNCATION: usize = 1000;

/// The equilibrium data of a potential that the correlation sums run on:
/// the normalized potential `w` (with `L_w 1 = 1`), its transfer matrix and
/// its equilibrium measure, all at a common depth `D ≥ 2`, together with the
/// estimated spectral gap `|λ₂|`.
///
/// With `w` normalized the correlations are matrix products:
/// `∫ g₁ · g₂∘σʲ dm = Σ_u m(u) (Lʲ g₁)(u) g₂(u)` for depth-`D` functions.
#[derive(Debug, Clone)]
pub struct Equilibrium {
    potential: DepthKFunction<f64>,
    matrix: RuelleMatrix,
    measure: MarkovMeasure,
    gap: f64,
    pressure: f64,
}

impl Equilibrium {
    /// Equilibrium data of an arbitrary potential `f`; `P(f)` is recorded and
    /// `f` is replaced by its normalized cohomologous representative.
    pub fn new(f: &DepthKFunction<f64>) -> Result<Self, PressureError> {
        let f2 = if f.depth() < 2 { f.promote(2)? } else { f.clone() };
        let data = rpf(&f2, DEFAULT_TOL, DEFAULT_MAX_ITER)?;
        let potential = normalize_potential(&f2, &data)?;
        let matrix = RuelleMatrix::new(&potential)?;
        let weights = data
            .eigenfunction
            .values()
            .iter()
            .zip(&data.adjoint_measure)
            .map(|(h, m)| h * m)
            .collect();
        let measure = MarkovMeasure::new(Arc::clone(potential.cylinders()), weights)?;
        Ok(Equilibrium {
            potential,
            matrix,
            measure,
            gap: data.gap_estimate,
            pressure: data.pressure,
        })
    }

    /// The same data re-expressed at depth `d` (no-op when `d ≤ D`).
    pub fn at_depth(&self, d: usize) -> Result<Self, PressureError> {
        if d <= self.depth() {
            return Ok(self.clone());
        }
        let potential = self.potential.promote(d)?;
        Ok(Equilibrium {
            matrix: RuelleMatrix::new(&potential)?,
            measure: self.measure.extend(d)?,
            potential,
            gap: self.gap,
            pressure: self.pressure,
        })
    }

    /// Common depth `D` of the stored data.
    pub fn depth(&self) -> usize {
        self.potential.depth()
    }

    /// Cylinders of depth `D`.
    pub fn cylinders(&self) -> &Arc<Cylinders> {
        self.potential.cylinders()
    }

    /// The normalized potential.
    pub fn potential(&self) -> &DepthKFunction<f64> {
        &self.potential
    }

    /// The transfer matrix of the normalized potential.
    pub fn matrix(&self) -> &RuelleMatrix {
        &self.matrix
    }

    /// The equilibrium measure at depth `D`.
    pub fn measure(&self) -> &MarkovMeasure {
        &self.measure
    }

    /// Estimated `|λ₂|` of the normalized transfer operator.
    pub fn gap(&self) -> f64 {
        self.gap
    }

    /// Pressure of the potential this context was built from.
    pub fn pressure(&self) -> f64 {
        self.pressure
    }

    /// Smallest `N` with `gapᴺ < 1e−12`, clamped to `[2D + 4, 1000]`.
    pub fn truncation(&self) -> usize {
        let floor = 2 * self.depth() + 4;
        let n = if self.gap <= 0.0 {
            floor
        } else {
            (TAIL_TARGET.ln() / self.gap.ln()).ceil() as usize + 1
        };
        n.clamp(floor, MAX_TRUNCATION)
    }

    /// `∫ g dm` for `g` of any depth.
    pub fn integrate(&self, g: &DepthKFunction<f64>) -> Result<f64, PressureError> {
        Ok(self.measure.integrate(g)?)
    }

    /// Value vector of `g` at depth `D`; `g` must not be deeper.
    pub(crate) fn values_of(&self, g: &DepthKFunction<f64>) -> Result<Vec<f64>, PressureError> {
        Ok(g.promote_to(self.cylinders())?.into_values())
    }

    /// A context deep enough for every function in `gs`.
    pub(crate) fn covering(&self, gs: &[&DepthKFunction<f64>]) -> Result<Self, PressureError> {
        let d = gs.iter().map(|g| g.depth()).max().unwrap_or(0);
        self.at_depth(d)
    }
}

/// `P_m g = g − ∫ g dm`.
///
/// The measure must be at least as deep as `g`, so the integral is exact.
pub fn project_mean_zero(
    g: &DepthKFunction<f64>,
    m: &MarkovMeasure,
) -> Result<DepthKFunction<f64>, PressureError> {
    if g.depth() > m.depth() {
        return Err(SftError::DepthMismatch(format!(
            "function of depth {} against a measure of depth {}",
            g.depth(),
            m.depth()
        ))
        .into());
    }
    let mean = m.integrate(g)?;
    Ok(g.add_constant(-mean))
}
