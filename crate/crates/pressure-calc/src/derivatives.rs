use serde::{Deserialize, Serialize};
use sft::DepthKFunction;
use transfer::pressure;

use crate::{
    covariance, project_mean_zero, triple_covariance, variance, CorrelationReport, Equilibrium,
    PotentialFamily, PressureError,
};

/// Absolute tolerance for "the first derivative vanishes" and "the base
/// pressure vanishes".
pub const HYPOTHESIS_TOL: f64 = 1e-8;
/// Default finite-difference step for first and second derivatives.
pub const FD_STEP: f64 = 1e-4;
/// Default finite-difference step for third derivatives.
pub const FD_STEP_THIRD: f64 = 1e-2;

/// A derivative next to its finite-difference oracle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivativeReport {
    /// Value from the correlation formula.
    pub value: f64,
    /// Central finite difference of the pressure.
    pub oracle_value: f64,
    /// `|value − oracle_value|`.
    pub abs_err: f64,
    /// Truncation order of the correlation sums (0 when none were needed).
    #[serde(rename = "truncation_N")]
    pub truncation_n: usize,
    /// Estimated tail of the correlation sums.
    pub tail_bound: f64,
}

pub(crate) fn require_params(fam: &PotentialFamily, n: usize) -> Result<(), PressureError> {
    if fam.params() != n {
        return Err(PressureError::ParameterCount {
            expected: n,
            found: fam.params(),
        });
    }
    Ok(())
}

/// The first partials `∂ᵢF(0)`, projected to mean zero, after checking that
/// each integral `∫ ∂ᵢF(0) dm` vanishes.
pub(crate) fn centered_first_partials(
    fam: &PotentialFamily,
    eq: &Equilibrium,
) -> Result<Vec<DepthKFunction<f64>>, PressureError> {
    (0..fam.params())
        .map(|i| {
            let d = fam.partial(&[i])?;
            let eq = eq.covering(&[&d])?;
            let mean = eq.integrate(&d)?;
            if mean.abs() > HYPOTHESIS_TOL {
                return Err(PressureError::HypothesisViolated {
                    hypothesis: format!("first derivative in parameter {i} vanishes"),
                    value: mean,
                });
            }
            project_mean_zero(&d, eq.measure())
        })
        .collect()
}

pub(crate) fn require_pressure_zero(eq: &Equilibrium) -> Result<(), PressureError> {
    if eq.pressure().abs() > HYPOTHESIS_TOL {
        return Err(PressureError::HypothesisViolated {
            hypothesis: "base pressure vanishes".into(),
            value: eq.pressure(),
        });
    }
    Ok(())
}

fn integral(eq: &Equilibrium, fam: &PotentialFamily, index: &[usize]) -> Result<CorrelationReport, PressureError> {
    Ok(CorrelationReport::exact(eq.integrate(&fam.partial(index)?)?))
}

/// `P'(0) = ∫ ∂ₛf₀ dm_{f₀}` for a one-parameter family.
pub fn pressure_d1(fam: &PotentialFamily) -> Result<f64, PressureError> {
    require_params(fam, 1)?;
    let eq = Equilibrium::new(&fam.base()?)?;
    Ok(integral(&eq, fam, &[0])?.value)
}

fn d2_parts(fam: &PotentialFamily) -> Result<CorrelationReport, PressureError> {
    require_params(fam, 1)?;
    let eq = Equilibrium::new(&fam.base()?)?;
    let d = centered_first_partials(fam, &eq)?;
    let n = eq.truncation();
    Ok(variance(&d[0], &eq, n)?.plus(integral(&eq, fam, &[0, 0])?))
}

/// `P''(0) = Var(∂ₛf₀) + ∫ ∂ₛₛf₀ dm`, valid when `P'(0) = 0`.
pub fn pressure_d2(fam: &PotentialFamily) -> Result<f64, PressureError> {
    Ok(d2_parts(fam)?.value)
}

/// `∂ᵤ∂ᵥP(0) = Cov(∂ᵤF, ∂ᵥF) + ∫ ∂ᵤᵥF dm` for a two-parameter family whose
/// first derivatives vanish.
pub fn pressure_d2_mixed(fam: &PotentialFamily) -> Result<f64, PressureError> {
    require_params(fam, 2)?;
    let eq = Equilibrium::new(&fam.base()?)?;
    let d = centered_first_partials(fam, &eq)?;
    let n = eq.truncation();
    Ok(covariance(&d[0], &d[1], &eq, n)?.value + integral(&eq, fam, &[0, 1])?.value)
}

fn d3_parts(fam: &PotentialFamily) -> Result<CorrelationReport, PressureError> {
    require_params(fam, 1)?;
    let eq = Equilibrium::new(&fam.base()?)?;
    require_pressure_zero(&eq)?;
    let d = centered_first_partials(fam, &eq)?;
    let n = eq.truncation();
    let triple = triple_covariance(&d[0], &d[0], &d[0], &eq, n)?;
    let cov = covariance(&d[0], &fam.partial(&[0, 0])?, &eq, n)?.times(3.0);
    Ok(triple.plus(cov).plus(integral(&eq, fam, &[0, 0, 0])?))
}

/// `P'''(0) = Σ₃(∂f) + 3 Cov(∂f, ∂²f) + ∫ ∂³f dm`, where `Σ₃` is the
/// triple covariance. Requires `P(f₀) = 0` and `P'(0) = 0`.
pub fn pressure_d3(fam: &PotentialFamily) -> Result<f64, PressureError> {
    Ok(d3_parts(fam)?.value)
}

/// `∂ᵤ∂ᵥ∂_wP(0)` for a three-parameter family with `P(F(0)) = 0` and
/// vanishing first derivatives:
///
/// ```text
/// Σ₃(∂ᵤF, ∂ᵥF, ∂_wF) + Cov(∂ᵤF, ∂ᵥ_wF) + Cov(∂ᵥF, ∂ᵤ_wF)
///                   + Cov(∂_wF, ∂ᵤᵥF) + ∫ ∂ᵤᵥ_wF dm
/// ```
pub fn pressure_d3_mixed(fam: &PotentialFamily) -> Result<f64, PressureError> {
    require_params(fam, 3)?;
    let eq = Equilibrium::new(&fam.base()?)?;
    require_pressure_zero(&eq)?;
    let d = centered_first_partials(fam, &eq)?;
    let n = eq.truncation();
    let mut total = triple_covariance(&d[0], &d[1], &d[2], &eq, n)?.value;
    for (i, pair) in [(0usize, [1usize, 2usize]), (1, [0, 2]), (2, [0, 1])] {
        total += covariance(&d[i], &fam.partial(&pair)?, &eq, n)?.value;
    }
    Ok(total + integral(&eq, fam, &[0, 1, 2])?.value)
}

/// Central finite difference of `s ↦ P(f_s)` at `0` for a one-parameter
/// family: two-point (order 1), three-point (order 2) or the five-point
/// stencil `(P(2h) − 2P(h) + 2P(−h) − P(−2h)) / 2h³` (order 3).
pub fn fd_oracle(fam: &PotentialFamily, order: usize, h: f64) -> Result<f64, PressureError> {
    require_params(fam, 1)?;
    let p = |s: f64| -> Result<f64, PressureError> { Ok(pressure(&fam.eval(&[s])?)?) };
    match order {
        1 => Ok((p(h)? - p(-h)?) / (2.0 * h)),
        2 => Ok((p(h)? - 2.0 * p(0.0)? + p(-h)?) / (h * h)),
        3 => Ok((p(2.0 * h)? - 2.0 * p(h)? + 2.0 * p(-h)? - p(-2.0 * h)?) / (2.0 * h * h * h)),
        _ => Err(PressureError::UnsupportedDerivative(format!("order {order}"))),
    }
}

/// The order-`order` derivative of the pressure along a one-parameter
/// family together with its finite-difference oracle at the default step.
pub fn derivative_report(fam: &PotentialFamily, order: usize) -> Result<DerivativeReport, PressureError> {
    let parts = match order {
        1 => CorrelationReport::exact(pressure_d1(fam)?),
        2 => d2_parts(fam)?,
        3 => d3_parts(fam)?,
        _ => return Err(PressureError::UnsupportedDerivative(format!("order {order}"))),
    };
    let h = if order == 3 { FD_STEP_THIRD } else { FD_STEP };
    let oracle_value = fd_oracle(fam, order, h)?;
    Ok(DerivativeReport {
        value: parts.value,
        oracle_value,
        abs_err: (parts.value - oracle_value).abs(),
        truncation_n: parts.truncation,
        tail_bound: parts.tail_bound,
    })
}

/// `d/ds ∫ w_s dm_{f_s}` at `s = 0`, equal to
/// `Cov(w₀, ∂ₛf₀) + ∫ ∂ₛw₀ dm_{f₀}` for one-parameter families `w` and `f`.
pub fn measure_derivative(w_fam: &PotentialFamily, f_fam: &PotentialFamily) -> Result<f64, PressureError> {
    require_params(w_fam, 1)?;
    require_params(f_fam, 1)?;
    let eq = Equilibrium::new(&f_fam.base()?)?;
    let n = eq.truncation();
    let cov = covariance(&w_fam.base()?, &f_fam.partial(&[0])?, &eq, n)?;
    Ok(cov.value + eq.integrate(&w_fam.partial(&[0])?)?)
}
