use pressure_calc::{
    direct_triple, pressure_d1, pressure_d2, pressure_d3, project_mean_zero, triple_covariance,
    CorrelationReport, Equilibrium, PolynomialFamily,
};
use serde::{Deserialize, Serialize};
use sft::DepthKFunction;

use crate::{flow_measure_factor, flow_pressure_of_hat, hat_function, FlowFunction, SuspensionError, SuspensionFlow};

/// Finite-difference steps of the flow side, by derivative order.
pub const FLOW_FD_STEPS: [f64; 3] = [1e-4, 1e-3, 1e-2];

/// A polynomial family of flow functions
/// `F_s = F₀ + s F₁ + s²/2 F₂ + s³/6 F₃`.
#[derive(Debug, Clone)]
pub struct FlowFamily {
    terms: Vec<FlowFunction>,
}

impl FlowFamily {
    /// The constant family `F_s = F₀`.
    pub fn new(base: FlowFunction) -> Self {
        FlowFamily { terms: vec![base] }
    }

    /// Sets the coefficient `∂ₛʲF₀` for `1 ≤ j ≤ 3`; lower coefficients that
    /// were never set stay zero.
    pub fn with_term(mut self, j: usize, f: FlowFunction) -> Result<Self, SuspensionError> {
        if !(1..=3).contains(&j) {
            return Err(SuspensionError::UnsupportedOrder(j));
        }
        while self.terms.len() <= j {
            let zero = FlowFunction::from_fn(self.terms[0].cylinders().clone(), |_, _| 0.0);
            self.terms.push(zero);
        }
        self.terms[j] = f;
        Ok(self)
    }

    /// `F₀`.
    pub fn base(&self) -> &FlowFunction {
        &self.terms[0]
    }

    /// The coefficient `∂ₛʲF₀`, if set.
    pub fn term(&self, j: usize) -> Option<&FlowFunction> {
        self.terms.get(j)
    }

    /// Fiber integrals `∂ₛʲF̂₀` for `j = 0..=3`, at a common depth (absent
    /// coefficients give zero).
    pub fn hats(&self, flow: &SuspensionFlow) -> Result<[DepthKFunction<f64>; 4], SuspensionError> {
        let raw: Vec<DepthKFunction<f64>> =
            self.terms.iter().map(|f| hat_function(flow, f)).collect::<Result<_, _>>()?;
        let depth = raw.iter().map(|h| h.depth()).max().unwrap_or(1);
        let zero = raw[0].promote(depth)?.scale(0.0);
        let mut out: [DepthKFunction<f64>; 4] = std::array::from_fn(|_| zero.clone());
        for (slot, h) in out.iter_mut().zip(raw) {
            *slot = h.promote(depth)?;
        }
        Ok(out)
    }
}

fn combine(hats: &[DepthKFunction<f64>; 4], s: f64) -> Result<DepthKFunction<f64>, SuspensionError> {
    let mut acc = hats[0].clone();
    let mut coeff = 1.0;
    for (j, h) in hats.iter().enumerate().skip(1) {
        coeff *= s / j as f64;
        acc = acc.try_add(&h.scale(coeff))?;
    }
    Ok(acc)
}

/// The flow-pressure curve `s ↦ c_s` of a family.
pub fn flow_pressure_curve(
    flow: &SuspensionFlow,
    fam: &FlowFamily,
    s: f64,
) -> Result<f64, SuspensionError> {
    let hats = fam.hats(flow)?;
    Ok(flow_pressure_of_hat(flow, &combine(&hats, s)?)?.value)
}

/// The two sides of the shift-to-flow derivative transfer at `s = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivativePair {
    /// Derivative order.
    pub order: usize,
    /// Central finite difference of the flow pressure along the family.
    pub flow_side: f64,
    /// `(∫ r dm)⁻¹` times the shift pressure derivative of the corrected
    /// family `F̂_s − (c₀ + … + c_{k−1} s^{k−1}/(k−1)!) r`.
    pub shift_side: f64,
    /// `|flow_side − shift_side|`.
    pub abs_err: f64,
}

/// The order-`order` derivative of the flow pressure `c_s` at `s = 0`,
/// computed twice: by finite differences of `c_s` on the flow side, and on
/// the shift side from the pressure derivative formulas.
///
/// On the shift side, `P(F̂_s − c_s r) = 0` for every `s`. Subtracting only
/// the Taylor polynomial of `c_s` through order `k − 1` leaves a family
/// `G_s` whose pressure derivatives below order `k` vanish and whose
/// `k`-th derivative is `c⁽ᵏ⁾ ∫ r dm`, with `m` the equilibrium state of
/// `F̂₀ − c₀ r`. The lower coefficients `c⁽ʲ⁾` come from the same identity
/// one order at a time.
pub fn flow_pressure_derivative_transfer(
    flow: &SuspensionFlow,
    fam: &FlowFamily,
    order: usize,
) -> Result<DerivativePair, SuspensionError> {
    if !(1..=3).contains(&order) {
        return Err(SuspensionError::UnsupportedOrder(order));
    }
    let hats = fam.hats(flow)?;
    let roof = flow.roof().promote(hats[0].depth().max(flow.roof().depth()))?;
    let hats: [DepthKFunction<f64>; 4] = {
        let d = roof.depth();
        let mut out = hats.clone();
        for h in out.iter_mut() {
            *h = h.promote(d)?;
        }
        out
    };

    let c0 = flow_pressure_of_hat(flow, &hats[0])?.value;
    let base = hats[0].try_sub(&roof.scale(c0))?;
    let eq = Equilibrium::new(&base)?;
    let factor = flow_measure_factor(eq.measure(), &roof)?;
    let mut c = vec![c0];
    for k in 1..=order {
        let mut poly = PolynomialFamily::new(1, base.clone())?;
        for (j, h) in hats.iter().enumerate().skip(1) {
            let correction = if j < k { c[j] } else { 0.0 };
            poly = poly.with_term(&vec![0; j], h.try_sub(&roof.scale(correction))?)?;
        }
        let shifted = poly.to_family()?;
        let d = match k {
            1 => pressure_d1(&shifted)?,
            2 => pressure_d2(&shifted)?,
            _ => pressure_d3(&shifted)?,
        };
        c.push(d / factor);
    }
    let shift_side = c[order];

    let h = FLOW_FD_STEPS[order - 1];
    let cs = |s: f64| -> Result<f64, SuspensionError> {
        Ok(flow_pressure_of_hat(flow, &combine(&hats, s)?)?.value)
    };
    let flow_side = match order {
        1 => (cs(h)? - cs(-h)?) / (2.0 * h),
        2 => (cs(h)? - 2.0 * c0 + cs(-h)?) / (h * h),
        _ => (cs(2.0 * h)? - 2.0 * cs(h)? + 2.0 * cs(-h)? - cs(-2.0 * h)?) / (2.0 * h * h * h),
    };
    Ok(DerivativePair {
        order,
        flow_side,
        shift_side,
        abs_err: (flow_side - shift_side).abs(),
    })
}

/// Data of the shift-to-flow triple identity for a direction `∂F`: the
/// equilibrium state `m` of `F̂₀ − c₀ r`, the normalizer `∫ r dm` and the
/// centered fiber integral of `∂F`.
#[derive(Debug, Clone)]
pub struct TripleSetup {
    /// Equilibrium data of `F̂₀ − c₀ r`.
    pub equilibrium: Equilibrium,
    /// `∫ r dm`.
    pub factor: f64,
    /// `∂F̂` projected to `m`-mean zero.
    pub direction: DepthKFunction<f64>,
}

impl TripleSetup {
    /// Builds the setup for base flow function `f0` and direction `df`.
    pub fn new(flow: &SuspensionFlow, f0: &FlowFunction, df: &FlowFunction) -> Result<Self, SuspensionError> {
        let hat0 = hat_function(flow, f0)?;
        let c0 = flow_pressure_of_hat(flow, &hat0)?.value;
        let depth = hat0.depth().max(flow.roof().depth());
        let base = hat0.promote(depth)?.try_sub(&flow.roof().promote(depth)?.scale(c0))?;
        let equilibrium = Equilibrium::new(&base)?;
        let dhat = hat_function(flow, df)?;
        let equilibrium = equilibrium.at_depth(dhat.depth())?;
        let direction = project_mean_zero(&dhat, equilibrium.measure())?;
        let factor = flow_measure_factor(equilibrium.measure(), flow.roof())?;
        Ok(TripleSetup {
            equilibrium,
            factor,
            direction,
        })
    }

    /// `(∫ r dm)⁻¹ Σ_{m,n} ∫ ∂F̂ · ∂F̂∘σⁿ · ∂F̂∘σᵐ dm`, truncated at order `n`.
    pub fn double_sum(&self, n: usize) -> Result<CorrelationReport, SuspensionError> {
        let g = &self.direction;
        Ok(triple_covariance(g, g, g, &self.equilibrium, n)?.times(1.0 / self.factor))
    }

    /// `(∫ r dm)⁻¹ (1/n) ∫ (S_n ∂F̂)³ dm`, the finite-`n` triple estimator.
    pub fn estimator(&self, n: usize) -> Result<f64, SuspensionError> {
        let g = &self.direction;
        Ok(direct_triple(g, g, g, &self.equilibrium, n)? / self.factor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::FiberProfile;
    use sft::{Cylinders, Sft};
    use std::sync::Arc;

    fn setup() -> (SuspensionFlow, Arc<Cylinders>) {
        let s = Sft::golden_mean();
        let roof = DepthKFunction::on(&s, 2, |u| 0.8 + 0.3 * u[0] as f64 + 0.15 * u[1] as f64).unwrap();
        (SuspensionFlow::new(roof).unwrap(), Arc::new(Cylinders::new(&s, 1).unwrap()))
    }

    #[test]
    fn constant_family_has_zero_derivatives() {
        let (flow, cyl) = setup();
        let f0 = FlowFunction::from_fn(cyl, |w, t| 0.2 * w[0] as f64 - 0.1 * t);
        let fam = FlowFamily::new(f0);
        for order in 1..=3 {
            let pair = flow_pressure_derivative_transfer(&flow, &fam, order).unwrap();
            assert!(pair.shift_side.abs() < 1e-9, "{pair:?}");
            assert!(pair.flow_side.abs() < 1e-6, "{pair:?}");
        }
    }

    #[test]
    fn constant_direction_moves_pressure_at_unit_rate() {
        // F_s = F₀ + s κ gives c_s = c₀ + s κ exactly.
        let (flow, cyl) = setup();
        let f0 = FlowFunction::from_fn(cyl.clone(), |w, _| 0.3 * w[0] as f64);
        let kappa = 0.7;
        let fam = FlowFamily::new(f0)
            .with_term(1, FlowFunction::uniform(cyl, FiberProfile::constant(kappa)).unwrap())
            .unwrap();
        let pair = flow_pressure_derivative_transfer(&flow, &fam, 1).unwrap();
        assert!((pair.shift_side - kappa).abs() < 1e-10, "{pair:?}");
        assert!((pair.flow_side - kappa).abs() < 1e-9, "{pair:?}");
        for order in 2..=3 {
            let pair = flow_pressure_derivative_transfer(&flow, &fam, order).unwrap();
            assert!(pair.shift_side.abs() < 1e-8, "{pair:?}");
        }
    }

    #[test]
    fn orders_outside_range_are_rejected() {
        let (flow, cyl) = setup();
        let fam = FlowFamily::new(FlowFunction::from_fn(cyl.clone(), |_, _| 0.0));
        assert!(matches!(
            flow_pressure_derivative_transfer(&flow, &fam, 4),
            Err(SuspensionError::UnsupportedOrder(4))
        ));
        let f = FlowFunction::from_fn(cyl, |_, _| 0.0);
        assert!(fam.with_term(0, f).is_err());
    }
}
