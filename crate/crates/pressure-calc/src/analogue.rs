use sft::{DepthKFunction, Sft};

use crate::{covariance, variance, Equilibrium, PressureError};

/// Probabilities `(x, (1 − x)/2, (1 − x)/2)` with Shannon entropy exactly
/// one nat, `x > 1/3`.
pub fn entropy_one_probabilities() -> [f64; 3] {
    let entropy = |x: f64| -x * x.ln() - (1.0 - x) * ((1.0 - x) / 2.0).ln();
    // Entropy decreases from log 3 > 1 at x = 1/3 to 0 at x = 1.
    let (mut lo, mut hi) = (1.0 / 3.0, 1.0 - 1e-12);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if entropy(mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let x = 0.5 * (lo + hi);
    [x, (1.0 - x) / 2.0, (1.0 - x) / 2.0]
}

/// The potential `F₀(x) = log p_{x₀}` on the full 3-shift with the
/// probabilities of [`entropy_one_probabilities`].
///
/// It has pressure zero, its equilibrium state is the Bernoulli measure `p`,
/// and `∫ F₀ dm = −H(p) = −1`.
pub fn entropy_one_base() -> DepthKFunction<f64> {
    let p = entropy_one_probabilities();
    let s = Sft::full_shift(3).expect("full shift");
    DepthKFunction::on(&s, 1, |u| p[u[0]].ln()).expect("depth 1")
}

/// Removes from `g` its mean and its covariance with `f0`:
/// `P g − (Cov(f0, g) / Var(P f0)) · P f0`, where `P` centers against the
/// equilibrium measure in `eq`.
///
/// The result `d` satisfies `∫ d dm = 0` and `Cov(f0, d) = 0` at the
/// truncation order of `eq`, which makes `∫ F dm_F` stationary along `d`.
pub fn decorrelate(
    g: &DepthKFunction<f64>,
    f0: &DepthKFunction<f64>,
    eq: &Equilibrium,
) -> Result<DepthKFunction<f64>, PressureError> {
    let eq = eq.covering(&[g, f0])?;
    let n = eq.truncation();
    let pg = g.add_constant(-eq.integrate(g)?);
    let pf = f0.add_constant(-eq.integrate(f0)?);
    let var = variance(&pf, &eq, n)?.value;
    if var <= 0.0 {
        return Ok(pg);
    }
    let c = covariance(f0, g, &eq, n)?.value / var;
    Ok(pg.try_sub(&pf.scale(c))?)
}
