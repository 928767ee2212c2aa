use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{cubic_direction, Direction, HolonomyError, Mat3, OrbitData, Part, Sampler, VariationPath};

/// Number of grid points used to bound `sup |q|` of non-Fourier samplers.
const SUP_GRID: usize = 4096;

/// `Tr(∂_u D ∂_v π)(t)` for two cubic directions `q_α` (`u`) and `q_β`
/// (`v`) along a closed orbit.
///
/// Kernels with weights `e^{±2(t−s)}` act on `Re q_β` and kernels with
/// weights `e^{±(t−s)}` on `Im q_β`; the integrals over the whole orbit carry
/// the factors `(e^{±2l} − 1)⁻¹` and `(e^{±l} − 1)⁻¹`.
pub fn second_variation_trace_cc(orbit: &OrbitData, t: f64) -> Result<f64, HolonomyError> {
    let l = orbit.length();
    let qa = orbit.q_alpha.eval(t);
    let qb = &orbit.q_beta;
    let k = |w: f64, part: Part, end: f64| qb.kernel(w, t, part, 0.0, end);
    let re_part = k(-2.0, Part::Re, t)? - k(2.0, Part::Re, t)? + k(-2.0, Part::Re, l)? / (-2.0 * l).exp_m1()
        - k(2.0, Part::Re, l)? / (2.0 * l).exp_m1();
    let im_part = k(-1.0, Part::Im, t)? - k(1.0, Part::Im, t)? + k(-1.0, Part::Im, l)? / (-l).exp_m1()
        - k(1.0, Part::Im, l)? / l.exp_m1();
    Ok(qa.re * re_part + 2.0 * qa.im * im_part)
}

/// `Tr(∂_u D ∂_v π)(t)` for a cubic direction `q_α` (`u`) and a quadratic
/// direction `q_i` (`v`): only `Im q_α` and `Im q_i` enter, through kernels
/// with weights `e^{±(t−s)}`.
pub fn trace_mix_cq(orbit: &OrbitData, t: f64) -> Result<f64, HolonomyError> {
    let l = orbit.length();
    let qa = orbit.q_alpha.eval(t);
    let qi = &orbit.q_i;
    let k = |w: f64, end: f64| qi.kernel(w, t, Part::Im, 0.0, end);
    let inner = k(1.0, t)? - k(-1.0, t)? + k(1.0, l)? / l.exp_m1() - k(-1.0, l)? / (-l).exp_m1();
    Ok(2.0 * qa.im * inner)
}

/// The mixed cubic–quadratic second variation at `t`:
/// `½ Re y₂₁(t) − Tr(∂_u D ∂_v π)(t)`, where `y₂₁(t)` is supplied by the
/// caller (it solves an elliptic system on the surface and may be zero).
pub fn second_variation_trace_cq(orbit: &OrbitData, y21: Complex64, t: f64) -> Result<f64, HolonomyError> {
    Ok(0.5 * y21.re - trace_mix_cq(orbit, t)?)
}

/// `Tr(B(q_α(t)) ∂_v π(t))` assembled from the closed-form variations of
/// all three eigenvectors.
///
/// With `E` the matrix of rows `eⱼ` and `a = E⁻¹`, `∂a = −a ∂E a` and
/// `∂π_{kc} = ∂a_{c1} e_{1k} + a_{c1} ∂e_{1k}`. The `v` direction is driven
/// by `q_β` (cubic) or `q_i` (quadratic).
pub fn reassembled_trace(orbit: &OrbitData, direction: Direction, t: f64) -> Result<Complex64, HolonomyError> {
    let q = match direction {
        Direction::Cubic => orbit.q_beta.clone(),
        Direction::Quadratic => orbit.q_i.clone(),
    };
    let l = orbit.length();
    let paths = (1..=3)
        .map(|i| VariationPath::new(l, direction, i, q.clone()))
        .collect::<Result<Vec<_>, _>>()?;
    let frame = *paths[0].frame();
    let rows = paths.iter().map(|p| p.eval(t).map(|y| y.transpose())).collect::<Result<Vec<_>, _>>()?;
    let de = Mat3::from_rows(&rows);
    let a = frame.change_of_basis(t);
    let da = -(a * de * a);
    let e1 = frame.eigenvector(1, t);
    let de1 = paths[0].eval(t)?;
    let dpi = Mat3::from_fn(|row, col| da[(col, 0)] * e1[row] + a[(col, 0)] * de1[row]);
    Ok((cubic_direction(orbit.q_alpha.eval(t)) * dpi).trace())
}

/// A truncated η integral with a bound on the discarded tails.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EtaValue {
    /// The integral over `[−T, T]`.
    pub value: f64,
    /// Upper bound for the tails beyond `±T`.
    pub truncation_bound: f64,
}

fn sup_over(q: &Sampler, cutoff: f64) -> f64 {
    let grid: Vec<f64> = (0..=SUP_GRID)
        .map(|k| -cutoff + 2.0 * cutoff * k as f64 / SUP_GRID as f64)
        .collect();
    q.sup_bound(&grid)
}

fn check_cutoff(cutoff: f64) -> Result<(), HolonomyError> {
    if !(cutoff >= 1.0) || !cutoff.is_finite() {
        return Err(HolonomyError::InvalidInput(format!("cutoff {cutoff}")));
    }
    Ok(())
}

/// `η_cc(T) = −Re q_α(0) (∫₀ᵀ e^{−2s} Re q_β + ∫_{−T}⁰ e^{2s} Re q_β)
/// − 2 Im q_α(0) (∫₀ᵀ e^{−s} Im q_β + ∫_{−T}⁰ e^{s} Im q_β)`.
///
/// With `M` bounding both samplers the tails are at most
/// `M² e^{−2T} + 4 M² e^{−T}`; for non-Fourier samplers `M` is the maximum
/// over a grid on `[−T, T]`.
pub fn eta_cc(q_alpha: &Sampler, q_beta: &Sampler, cutoff: f64) -> Result<EtaValue, HolonomyError> {
    check_cutoff(cutoff)?;
    let qa = q_alpha.eval(0.0);
    let re = q_beta.kernel(-2.0, 0.0, Part::Re, 0.0, cutoff)? + q_beta.kernel(2.0, 0.0, Part::Re, -cutoff, 0.0)?;
    let im = q_beta.kernel(-1.0, 0.0, Part::Im, 0.0, cutoff)? + q_beta.kernel(1.0, 0.0, Part::Im, -cutoff, 0.0)?;
    let m = sup_over(q_alpha, cutoff).max(sup_over(q_beta, cutoff));
    Ok(EtaValue {
        value: -qa.re * re - 2.0 * qa.im * im,
        truncation_bound: m * m * ((-2.0 * cutoff).exp() + 4.0 * (-cutoff).exp()),
    })
}

/// `η_cq(T) = 2 Im q_α(0) (∫₀ᵀ e^{−s} Im q_i + ∫_{−T}⁰ e^{s} Im q_i)`, the
/// limit of [`trace_mix_cq`] at `t = 0` over many traversals; the tails are
/// at most `4 M² e^{−T}`.
pub fn eta_cq(q_alpha: &Sampler, q_i: &Sampler, cutoff: f64) -> Result<EtaValue, HolonomyError> {
    check_cutoff(cutoff)?;
    let qa = q_alpha.eval(0.0);
    let im = q_i.kernel(-1.0, 0.0, Part::Im, 0.0, cutoff)? + q_i.kernel(1.0, 0.0, Part::Im, -cutoff, 0.0)?;
    let m = sup_over(q_alpha, cutoff).max(sup_over(q_i, cutoff));
    Ok(EtaValue {
        value: 2.0 * qa.im * im,
        truncation_bound: 4.0 * m * m * (-cutoff).exp(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::c;

    #[test]
    fn zero_beta_gives_zero() {
        let orbit = OrbitData::new(1.5).unwrap().with_alpha(Sampler::constant(Complex64::new(1.0, 1.0)));
        assert_eq!(second_variation_trace_cc(&orbit, 0.3).unwrap(), 0.0);
        assert_eq!(trace_mix_cq(&orbit, 0.3).unwrap(), 0.0);
        assert_eq!(eta_cc(&orbit.q_alpha, &orbit.q_beta, 5.0).unwrap().value, 0.0);
    }

    #[test]
    fn constant_eta_is_minus_one() {
        let one = Sampler::constant(c(1.0));
        let eta = eta_cc(&one, &one, 40.0).unwrap();
        assert!((eta.value + 1.0).abs() < 1e-15);
    }

    #[test]
    fn real_cubic_constants_have_closed_form() {
        // For q_α = q_β = 1 the orbit terms reduce to
        // ∫₀ˡ (e^{−2s}/(e^{−2l}−1) − e^{2s}/(e^{2l}−1)) ds = −1 at t = 0.
        let one = Sampler::constant(c(1.0));
        let orbit = OrbitData::new(2.0).unwrap().with_alpha(one.clone()).with_beta(one);
        assert!((second_variation_trace_cc(&orbit, 0.0).unwrap() + 1.0).abs() < 1e-14);
    }

    #[test]
    fn bad_cutoff_is_rejected() {
        let one = Sampler::constant(c(1.0));
        assert!(eta_cc(&one, &one, 0.5).is_err());
        assert!(eta_cq(&one, &one, f64::NAN).is_err());
    }
}
