use sft::DepthKFunction;

use crate::{MarkovMeasure, RuelleMatrix, TransferError};

const NORMALIZATION_TOL: f64 = 1e-9;

/// The operator `T = L_w ∘ P_m`, where `P_m g = g − ∫ g dm` removes the mean
/// and `w` is normalized (`L_w 1 = 1`).
///
/// On mean-zero functions `T` agrees with `L_w`, and its spectral radius is
/// the modulus of the second eigenvalue of `L_w`, which controls the decay
/// of correlations.
#[derive(Debug, Clone)]
pub struct ProjectedTransfer {
    l: RuelleMatrix,
    weights: Vec<f64>,
}

/// Builds `L_w ∘ P_m` for a normalized potential and its equilibrium
/// measure.
pub fn transfer_with_projection(
    w: &DepthKFunction<f64>,
    m: &MarkovMeasure,
) -> Result<ProjectedTransfer, TransferError> {
    let depth = w.depth().max(m.depth());
    let l = RuelleMatrix::at_depth(w, depth)?;
    let deviation = l
        .row_sums()
        .iter()
        .fold(0.0f64, |acc, r| acc.max((r - 1.0).abs()));
    if deviation > NORMALIZATION_TOL {
        return Err(TransferError::NotNormalized { deviation });
    }
    let weights = m.extend(depth)?.weights().to_vec();
    Ok(ProjectedTransfer { l, weights })
}

impl ProjectedTransfer {
    /// The underlying transfer matrix.
    pub fn matrix(&self) -> &RuelleMatrix {
        &self.l
    }

    /// Cylinder masses of the measure at the operator depth.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `T g = L(g − ∫ g dm)`.
    pub fn apply(&self, g: &[f64]) -> Vec<f64> {
        let mean: f64 = g.iter().zip(&self.weights).map(|(a, b)| a * b).sum();
        let centered: Vec<f64> = g.iter().map(|x| x - mean).collect();
        self.l.apply(&centered)
    }

    /// Estimate of the spectral radius of `T`: the geometric-mean growth of
    /// `‖Tⁿ g‖∞` over the second half of `iterations` steps from a generic
    /// start vector. Returns 0 when the iterate vanishes.
    pub fn spectral_radius_estimate(&self, iterations: usize) -> f64 {
        let n = self.l.dim();
        let mut v: Vec<f64> = (0..n).map(|i| ((i as f64 + 0.5) * 1.618).sin()).collect();
        let mut log_growth = 0.0;
        let mut counted = 0usize;
        for it in 0..iterations.max(2) {
            let y = self.apply(&v);
            let before = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            let after = y.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            if after == 0.0 || before == 0.0 || after < 1e-300 {
                return 0.0;
            }
            if it >= iterations / 2 {
                log_growth += (after / before).ln();
                counted += 1;
            }
            v = y.iter().map(|x| x / after).collect();
        }
        (log_growth / counted.max(1) as f64).exp()
    }
}
