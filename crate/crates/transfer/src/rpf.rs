use std::sync::Arc;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use sft::DepthKFunction;

use crate::{RuelleMatrix, TransferError};

/// Default convergence tolerance for power iteration.
pub const DEFAULT_TOL: f64 = 1e-12;
/// Default iteration cap for power iteration.
pub const DEFAULT_MAX_ITER: usize = 1_000_000;

const GAP_ITERATIONS: usize = 600;

/// Leading spectral data of a transfer operator.
#[derive(Debug, Clone)]
pub struct RpfData {
    /// Leading eigenvalue `ρ > 0`.
    pub rho: f64,
    /// Pressure `log ρ`.
    pub pressure: f64,
    /// Positive eigenfunction `h`, scaled so that `⟨μ, h⟩ = 1`.
    pub eigenfunction: DepthKFunction<f64>,
    /// Adjoint eigenvector `μ` (cylinder masses), summing to 1.
    pub adjoint_measure: Vec<f64>,
    /// Estimate of `|λ₂| / ρ` from deflated iteration, in `[0, 1)`.
    pub gap_estimate: f64,
    /// `‖L h − ρ h‖∞ / ‖h‖∞` at the returned eigenpair.
    pub residual: f64,
    /// Power-iteration steps used for the eigenfunction.
    pub iterations: usize,
}

impl Serialize for RpfData {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let measure = DepthKFunction::new(
            Arc::clone(self.eigenfunction.cylinders()),
            self.adjoint_measure.clone(),
        )
        .map_err(serde::ser::Error::custom)?;
        let mut st = s.serialize_struct("RpfData", 7)?;
        st.serialize_field("rho", &self.rho)?;
        st.serialize_field("pressure", &self.pressure)?;
        st.serialize_field("gap_estimate", &self.gap_estimate)?;
        st.serialize_field("residual", &self.residual)?;
        st.serialize_field("iterations", &self.iterations)?;
        st.serialize_field("eigenfunction", &self.eigenfunction.to_table())?;
        st.serialize_field("adjoint_measure", &measure.to_table())?;
        st.end()
    }
}

impl RpfData {
    /// Depth of the eigenfunction.
    pub fn depth(&self) -> usize {
        self.eigenfunction.depth()
    }
}

/// Leading eigenpair of a nonnegative operator by power iteration with
/// 1-norm renormalization. Returns `(vector, eigenvalue, residual, steps)`.
fn power_iterate(
    apply: impl Fn(&[f64]) -> Vec<f64>,
    n: usize,
    tol: f64,
    max_iter: usize,
) -> Result<(Vec<f64>, f64, f64, usize), TransferError> {
    let mut v = vec![1.0 / n as f64; n];
    let mut residual = f64::INFINITY;
    for it in 1..=max_iter {
        let y = apply(&v);
        let rho: f64 = y.iter().sum();
        let vmax = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        residual = y
            .iter()
            .zip(&v)
            .fold(0.0f64, |m, (a, b)| m.max((a - rho * b).abs()))
            / vmax;
        v = y.iter().map(|x| x / rho).collect();
        if residual <= tol * rho.max(1.0) {
            return Ok((v, rho, residual, it));
        }
    }
    Err(TransferError::NoConvergence {
        max_iter,
        residual,
    })
}

/// Computes RPF data for `w` at its own depth.
pub fn rpf(w: &DepthKFunction<f64>, tol: f64, max_iter: usize) -> Result<RpfData, TransferError> {
    rpf_with(&RuelleMatrix::new(w)?, tol, max_iter)
}

/// Computes RPF data for an already assembled transfer matrix.
pub fn rpf_with(l: &RuelleMatrix, tol: f64, max_iter: usize) -> Result<RpfData, TransferError> {
    let n = l.dim();
    let (mut h, _, _, iterations) = power_iterate(|v| l.apply(v), n, tol, max_iter)?;
    let (mut mu, _, _, _) = power_iterate(|v| l.apply_transpose(v), n, tol, max_iter)?;
    let msum: f64 = mu.iter().sum();
    mu.iter_mut().for_each(|x| *x /= msum);
    let pair: f64 = mu.iter().zip(&h).map(|(a, b)| a * b).sum();
    h.iter_mut().for_each(|x| *x /= pair);
    let lh = l.apply(&h);
    let rho = mu.iter().zip(&lh).map(|(a, b)| a * b).sum::<f64>();
    let hmin = h.iter().copied().fold(f64::INFINITY, f64::min);
    if hmin <= 0.0 {
        return Err(TransferError::NonPositiveEigenfunction { value: hmin });
    }
    let hmax = h.iter().copied().fold(0.0f64, f64::max);
    let residual = lh
        .iter()
        .zip(&h)
        .fold(0.0f64, |m, (a, b)| m.max((a - rho * b).abs()))
        / hmax;
    let gap_estimate = deflated_gap(l, &h, &mu, rho);
    let eigenfunction = DepthKFunction::new(Arc::clone(l.cylinders()), h)?;
    Ok(RpfData {
        rho,
        pressure: rho.ln(),
        eigenfunction,
        adjoint_measure: mu,
        gap_estimate,
        residual,
        iterations,
    })
}

/// Growth rate of `L / ρ` on the complement of the leading eigenvector,
/// measured as the geometric mean of the per-step norm ratio over the second
/// half of a fixed number of deflated iterations.
fn deflated_gap(l: &RuelleMatrix, h: &[f64], mu: &[f64], rho: f64) -> f64 {
    let n = h.len();
    let deflate = |v: &mut Vec<f64>| {
        let c: f64 = mu.iter().zip(v.iter()).map(|(a, b)| a * b).sum();
        v.iter_mut().zip(h).for_each(|(x, hi)| *x -= c * hi);
    };
    // Deterministic start vector with generic components.
    let mut v: Vec<f64> = (0..n)
        .map(|i| ((i as f64 + 1.0) * 12.9898).sin() * 43758.5453 % 1.0)
        .collect();
    deflate(&mut v);
    let mut log_growth = 0.0;
    let mut counted = 0usize;
    for it in 0..GAP_ITERATIONS {
        let mut y: Vec<f64> = l.apply(&v).iter().map(|x| x / rho).collect();
        deflate(&mut y);
        let before = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let after = y.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if after == 0.0 || before == 0.0 {
            return 0.0;
        }
        if it >= GAP_ITERATIONS / 2 {
            log_growth += (after / before).ln();
            counted += 1;
        }
        v = y.iter().map(|x| x / after).collect();
    }
    (log_growth / counted as f64).exp().clamp(0.0, 1.0 - f64::EPSILON)
}

/// The pressure `P(w) = log ρ(L_w)`.
pub fn pressure(w: &DepthKFunction<f64>) -> Result<f64, TransferError> {
    Ok(rpf(w, DEFAULT_TOL, DEFAULT_MAX_ITER)?.pressure)
}

/// Replaces `w` by the cohomologous potential
/// `w + log h − log h∘σ − log ρ`, which satisfies `L 1 = 1` and has pressure
/// zero.
///
/// For depth `k ≥ 2` the eigenfunction depends only on the first `k − 1`
/// symbols, so the result keeps depth `k`; a depth-1 potential with a
/// non-constant eigenfunction is returned at depth 2.
pub fn normalize_potential(
    w: &DepthKFunction<f64>,
    data: &RpfData,
) -> Result<DepthKFunction<f64>, TransferError> {
    let h = &data.eigenfunction;
    if h.depth() < w.depth() {
        return Err(sft::SftError::DepthMismatch(format!(
            "eigenfunction of depth {} for a potential of depth {}",
            h.depth(),
            w.depth()
        ))
        .into());
    }
    let w = w.promote_to(h.cylinders())?;
    let hv = h.values();
    if let Some(&v) = hv.iter().find(|&&v| v <= 0.0) {
        return Err(TransferError::NonPositiveEigenfunction { value: v });
    }
    let hmax = hv.iter().copied().fold(0.0f64, f64::max);
    let hmin = hv.iter().copied().fold(f64::INFINITY, f64::min);
    let log_rho = data.rho.ln();
    if hmax - hmin <= 1e-14 * hmax {
        return Ok(w.add_constant(-log_rho));
    }
    let cyl = h.cylinders();
    if cyl.depth() >= 2 {
        // h∘σ on the word v is h at any successor of v (they share the
        // first k − 1 symbols of σv, which is all h depends on).
        let values = (0..cyl.len())
            .map(|i| {
                let next = cyl.successors(i)[0];
                w.at(i) + hv[i].ln() - hv[next].ln() - log_rho
            })
            .collect();
        Ok(DepthKFunction::new(Arc::clone(cyl), values)?)
    } else {
        let log_h = h.map(f64::ln);
        let shifted = log_h.compose_shift()?;
        let base = w.promote_to(shifted.cylinders())?;
        let log_h2 = log_h.promote_to(shifted.cylinders())?;
        let out = base.zip_with(&log_h2, |a, b| a + b)?;
        let out = out.zip_with(&shifted, |a, b| a - b)?;
        Ok(out.add_constant(-log_rho))
    }
}
