use serde::{Deserialize, Serialize};

use crate::derivatives::{centered_first_partials, require_params, require_pressure_zero, HYPOTHESIS_TOL};
use crate::{covariance, triple_covariance, CorrelationReport, Equilibrium, PotentialFamily, PressureError};

/// Denominators `|∫ F dm|` below this are treated as zero.
const DENOMINATOR_TOL: f64 = 1e-12;

/// The pressure metric with its two ingredients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    /// `−Cov(∂ᵤF, ∂ᵥF) / ∫ F dm`.
    pub value: f64,
    /// The covariance numerator.
    pub covariance: CorrelationReport,
    /// `∫ F(0) dm_{F(0)}`.
    pub denominator: f64,
}

/// `⟨∂ᵤ, ∂ᵥ⟩ = −Cov(∂ᵤF, ∂ᵥF, m_F) / ∫ F dm_F` at the base of a
/// two-parameter family with `P(F(0)) = 0`.
pub fn pressure_metric(fam: &PotentialFamily) -> Result<MetricReport, PressureError> {
    require_params(fam, 2)?;
    let base = fam.base()?;
    let eq = Equilibrium::new(&base)?;
    require_pressure_zero(&eq)?;
    let cov = covariance(&fam.partial(&[0])?, &fam.partial(&[1])?, &eq, eq.truncation())?;
    let denominator = eq.integrate(&base)?;
    if denominator.abs() < DENOMINATOR_TOL {
        return Err(PressureError::DegenerateDenominator { value: denominator });
    }
    Ok(MetricReport {
        value: -cov.value / denominator,
        covariance: cov,
        denominator,
    })
}

/// `∂_w Cov_{m_{F(0,0,w)}}(∂ᵤF, ∂ᵥF)` at `w = 0` for a three-parameter
/// family `(u, v, w)` whose first pressure derivatives vanish:
///
/// ```text
/// Σ₃(∂ᵤF, ∂ᵥF, ∂_wF) + Cov(∂ᵤF, ∂_wᵥF) + Cov(∂ᵥF, ∂_wᵤF)
/// ```
pub fn covariance_d1(fam: &PotentialFamily) -> Result<CorrelationReport, PressureError> {
    require_params(fam, 3)?;
    let eq = Equilibrium::new(&fam.base()?)?;
    let d = centered_first_partials(fam, &eq)?;
    three_term(fam, &eq, &d)
}

fn three_term(
    fam: &PotentialFamily,
    eq: &Equilibrium,
    d: &[sft::DepthKFunction<f64>],
) -> Result<CorrelationReport, PressureError> {
    let n = eq.truncation();
    let triple = triple_covariance(&d[0], &d[1], &d[2], eq, n)?;
    let a = covariance(&d[0], &fam.partial(&[2, 1])?, eq, n)?;
    let b = covariance(&d[1], &fam.partial(&[2, 0])?, eq, n)?;
    Ok(triple.plus(a).plus(b))
}

/// First derivative along `w` of the pressure metric `⟨∂ᵤ, ∂ᵥ⟩` at the
/// base of a three-parameter family `(u, v, w)`.
///
/// The three-term value of [`covariance_d1`] is the derivative of the metric
/// when the base is normalized with `∫ F(0) dm = −1`, every first pressure
/// derivative vanishes, and the denominator is stationary along `w`
/// (`Cov(F(0), ∂_wF) + ∫ ∂_wF dm = 0`). Each of these is checked.
pub fn pressure_metric_d1(fam: &PotentialFamily) -> Result<CorrelationReport, PressureError> {
    require_params(fam, 3)?;
    let base = fam.base()?;
    let eq = Equilibrium::new(&base)?;
    require_pressure_zero(&eq)?;
    let d = centered_first_partials(fam, &eq)?;
    let denominator = eq.integrate(&base)?;
    if (denominator + 1.0).abs() > HYPOTHESIS_TOL {
        return Err(PressureError::HypothesisViolated {
            hypothesis: "∫ F(0) dm = −1".into(),
            value: denominator,
        });
    }
    let dw = fam.partial(&[2])?;
    let drift = covariance(&base, &dw, &eq, eq.truncation())?.value + eq.integrate(&dw)?;
    if drift.abs() > HYPOTHESIS_TOL {
        return Err(PressureError::HypothesisViolated {
            hypothesis: "∫ F dm is stationary along w".into(),
            value: drift,
        });
    }
    three_term(fam, &eq, &d)
}
