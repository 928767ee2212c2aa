use pressure_calc::Equilibrium;
use serde::{Deserialize, Serialize};
use sft::DepthKFunction;
use transfer::pressure;

use crate::{hat_function, FlowFunction, SuspensionError, SuspensionFlow};

/// Bisection stops once the bracket is narrower than this.
pub const BISECTION_WIDTH: f64 = 1e-6;
/// Largest accepted `|P(F̂ − c r)|` at the returned root.
pub const RESIDUAL_TARGET: f64 = 1e-11;
const MAX_NEWTON: usize = 50;

/// The flow pressure together with diagnostics of the root search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowPressure {
    /// The root `c` of `P(F̂ − c r) = 0`.
    pub value: f64,
    /// `|P(F̂ − c r)|` at the returned root.
    pub residual: f64,
    /// Bisection steps taken.
    pub bisection_steps: usize,
    /// Newton steps taken.
    pub newton_steps: usize,
}

/// The flow pressure of `F`: the unique `c` with `P(F̂ − c r) = 0`.
pub fn flow_pressure(flow: &SuspensionFlow, f: &FlowFunction) -> Result<FlowPressure, SuspensionError> {
    let hat = hat_function(flow, f)?;
    flow_pressure_of_hat(flow, &hat)
}

/// The root `c` of `P(ĝ − c r) = 0` for a fiber integral `ĝ` already on the
/// base.
///
/// For `c ≥ 0` the pressure lies between `P(ĝ) − c max r` and
/// `P(ĝ) − c min r` (and symmetrically for `c < 0`), so the root lies
/// between `P(ĝ)/max r` and `P(ĝ)/min r`. Bisection narrows that bracket to
/// [`BISECTION_WIDTH`]; Newton steps with slope `−∫ r dm` finish.
pub fn flow_pressure_of_hat(
    flow: &SuspensionFlow,
    hat: &DepthKFunction<f64>,
) -> Result<FlowPressure, SuspensionError> {
    let roof = flow.roof();
    let shifted = |c: f64| -> Result<DepthKFunction<f64>, SuspensionError> {
        let depth = hat.depth().max(roof.depth());
        Ok(hat.promote(depth)?.try_sub(&roof.promote(depth)?.scale(c))?)
    };
    let p = |c: f64| -> Result<f64, SuspensionError> { Ok(pressure(&shifted(c)?)?) };

    let p0 = pressure(hat)?;
    let (a, b) = (p0 / roof.max_value(), p0 / roof.min_value());
    let pad = 1e-9 * (1.0 + a.abs().max(b.abs()));
    let (mut lo, mut hi) = (a.min(b) - pad, a.max(b) + pad);
    if !(p(lo)? >= 0.0 && p(hi)? <= 0.0) {
        return Err(SuspensionError::BracketingFailed { lo, hi });
    }
    let mut bisection_steps = 0;
    while hi - lo > BISECTION_WIDTH {
        let mid = 0.5 * (lo + hi);
        if p(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        bisection_steps += 1;
    }

    let mut c = 0.5 * (lo + hi);
    let mut newton_steps = 0;
    let mut residual = f64::INFINITY;
    for _ in 0..MAX_NEWTON {
        let eq = Equilibrium::new(&shifted(c)?)?;
        residual = eq.pressure().abs();
        let slope = eq.integrate(roof)?;
        let step = eq.pressure() / slope;
        if step.abs() <= 4.0 * f64::EPSILON * c.abs().max(1.0) {
            break;
        }
        c += step;
        newton_steps += 1;
    }
    if residual > RESIDUAL_TARGET {
        let last = p(c)?.abs();
        if last > RESIDUAL_TARGET {
            return Err(SuspensionError::RootNotConverged { residual: last });
        }
        residual = last;
    }
    Ok(FlowPressure {
        value: c,
        residual,
        bisection_steps,
        newton_steps,
    })
}
