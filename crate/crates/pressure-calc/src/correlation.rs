use serde::{Deserialize, Serialize};
use sft::DepthKFunction;

use crate::{Equilibrium, PressureError};

/// A truncated correlation sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationReport {
    /// The truncated sum.
    pub value: f64,
    /// Truncation order `N`.
    pub truncation: usize,
    /// Estimated size of the neglected terms, geometric in `N` with ratio
    /// given by the spectral gap.
    pub tail_bound: f64,
}

impl CorrelationReport {
    /// Sum of two reports: values and tail bounds add, truncation is the
    /// larger of the two (exact parts report 0).
    pub fn plus(self, other: CorrelationReport) -> CorrelationReport {
        CorrelationReport {
            value: self.value + other.value,
            truncation: self.truncation.max(other.truncation),
            tail_bound: self.tail_bound + other.tail_bound,
        }
    }

    /// The report of `c · value`.
    pub fn times(self, c: f64) -> CorrelationReport {
        CorrelationReport {
            value: c * self.value,
            truncation: self.truncation,
            tail_bound: c.abs() * self.tail_bound,
        }
    }

    /// A value with no truncation error.
    pub fn exact(value: f64) -> CorrelationReport {
        CorrelationReport {
            value,
            truncation: 0,
            tail_bound: 0.0,
        }
    }
}

const MEAN_ZERO_TOL: f64 = 1e-9;

fn check_mean_zero(eq: &Equilibrium, g: &DepthKFunction<f64>) -> Result<(), PressureError> {
    let mean = eq.integrate(g)?;
    if mean.abs() > MEAN_ZERO_TOL * g.sup_norm().max(1.0) {
        return Err(PressureError::NotMeanZero { mean });
    }
    Ok(())
}

/// `Σ_{k>N} gᵏ` scaled by `(1 − g)` in the denominator, guarded at `g → 1`.
fn geometric_tail(gap: f64, n: usize) -> f64 {
    let g = gap.clamp(0.0, 1.0 - 1e-12);
    g.powi(n as i32 + 1) / (1.0 - g)
}

/// `Σ_{k>N} (6k + 3) gᵏ`, bounding the number of configurations whose
/// largest gap equals `k` times `gᵏ`.
fn triple_tail(gap: f64, n: usize) -> f64 {
    let g = gap.clamp(0.0, 1.0 - 1e-12);
    let n1 = (n + 1) as f64;
    // Σ_{k≥n+1} k gᵏ = g^{n+1} (n+1 − n g) / (1 − g)².
    let first = g.powi(n as i32 + 1) * (n1 - (n as f64) * g) / ((1.0 - g) * (1.0 - g));
    6.0 * first + 3.0 * geometric_tail(g, n)
}

/// Lag-`j` correlations `C(j) = ∫ g₁ · g₂∘σʲ dm` for `j = 0..=n`.
fn lagged(eq: &Equilibrium, g1: &[f64], g2: &[f64], n: usize) -> Vec<f64> {
    let m = eq.measure().weights();
    let mut v = g1.to_vec();
    let mut out = Vec::with_capacity(n + 1);
    for j in 0..=n {
        if j > 0 {
            v = eq.matrix().apply(&v);
        }
        out.push(v.iter().zip(g2).zip(m).map(|((a, b), w)| a * b * w).sum());
    }
    out
}

/// Green–Kubo variance `∫ g² dm + 2 Σ_{j=1..N} ∫ g · g∘σʲ dm` of a mean-zero
/// function.
pub fn variance(
    g: &DepthKFunction<f64>,
    eq: &Equilibrium,
    n: usize,
) -> Result<CorrelationReport, PressureError> {
    let eq = eq.covering(&[g])?;
    check_mean_zero(&eq, g)?;
    let v = eq.values_of(g)?;
    let c = lagged(&eq, &v, &v, n);
    let value = c[0] + 2.0 * c[1..].iter().sum::<f64>();
    let norm = g.sup_norm();
    Ok(CorrelationReport {
        value,
        truncation: n,
        tail_bound: 2.0 * norm * norm * geometric_tail(eq.gap(), n),
    })
}

/// Green–Kubo covariance `Σ_{|j|≤N} ∫ g₁ · g₂∘σʲ dm` (negative `j` meaning
/// `g₁∘σ^{|j|} · g₂`).
///
/// Both arguments are projected to mean zero first, which leaves the
/// infinite sum unchanged and makes every term decay.
pub fn covariance(
    g1: &DepthKFunction<f64>,
    g2: &DepthKFunction<f64>,
    eq: &Equilibrium,
    n: usize,
) -> Result<CorrelationReport, PressureError> {
    let eq = eq.covering(&[g1, g2])?;
    let p1 = eq.values_of(&g1.add_constant(-eq.integrate(g1)?))?;
    let p2 = eq.values_of(&g2.add_constant(-eq.integrate(g2)?))?;
    let forward = lagged(&eq, &p1, &p2, n);
    let backward = lagged(&eq, &p2, &p1, n);
    let value = forward[0] + forward[1..].iter().sum::<f64>() + backward[1..].iter().sum::<f64>();
    let norms = sup(&p1) * sup(&p2);
    Ok(CorrelationReport {
        value,
        truncation: n,
        tail_bound: 2.0 * norms * geometric_tail(eq.gap(), n),
    })
}

fn sup(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

/// Precomputed powers for three-point correlations of `f₀, f₁, f₂`:
/// `forward[p][a] = Lᵃ f_p` and `backward[p][c] = (Lᵀ)ᶜ (m ⊙ f_p)`.
struct TripleKernel {
    values: [Vec<f64>; 3],
    forward: [Vec<Vec<f64>>; 3],
    backward: [Vec<Vec<f64>>; 3],
}

impl TripleKernel {
    fn new(eq: &Equilibrium, values: [Vec<f64>; 3], reach: usize) -> Self {
        let m = eq.measure().weights();
        let build = |v: &Vec<f64>, step: &dyn Fn(&[f64]) -> Vec<f64>| {
            let mut out = Vec::with_capacity(reach + 1);
            out.push(v.clone());
            for _ in 0..reach {
                let next = step(out.last().expect("nonempty"));
                out.push(next);
            }
            out
        };
        let l = eq.matrix();
        let forward = [0, 1, 2].map(|p| build(&values[p], &|x| l.apply(x)));
        let backward = [0, 1, 2].map(|p| {
            let mf: Vec<f64> = values[p].iter().zip(m).map(|(a, b)| a * b).collect();
            build(&mf, &|x| l.apply_transpose(x))
        });
        TripleKernel {
            values,
            forward,
            backward,
        }
    }

    /// `∫ f₀ · f₁∘σⁿ · f₂∘σᵐ dm`, for `|n|, |m|` and all consecutive gaps
    /// within the precomputed reach.
    fn term(&self, n: i64, m: i64) -> f64 {
        let mut slots = [(0i64, 0usize), (n, 1), (m, 2)];
        slots.sort();
        let a = (slots[1].0 - slots[0].0) as usize;
        let c = (slots[2].0 - slots[1].0) as usize;
        let (p, q, r) = (slots[0].1, slots[1].1, slots[2].1);
        let la = &self.forward[p][a];
        let fq = &self.values[q];
        let lc = &self.backward[r][c];
        la.iter().zip(fq).zip(lc).map(|((x, y), z)| x * y * z).sum()
    }
}

/// Third-order correlation sum
/// `Σ ∫ g₁ · g₂∘σⁿ · g₃∘σᵐ dm` of three mean-zero functions.
///
/// The sum runs over every `(n, m)` whose sorted times `t₀ ≤ t₁ ≤ t₂` have
/// both gaps `t₁ − t₀` and `t₂ − t₁` at most `N`. This region contains the
/// box `|n|, |m| ≤ N`, and every omitted term is bounded by `gapᴺ⁺¹`.
pub fn triple_covariance(
    g1: &DepthKFunction<f64>,
    g2: &DepthKFunction<f64>,
    g3: &DepthKFunction<f64>,
    eq: &Equilibrium,
    n: usize,
) -> Result<CorrelationReport, PressureError> {
    let eq = eq.covering(&[g1, g2, g3])?;
    for g in [g1, g2, g3] {
        check_mean_zero(&eq, g)?;
    }
    let values = [eq.values_of(g1)?, eq.values_of(g2)?, eq.values_of(g3)?];
    let norms: f64 = values.iter().map(|v| sup(v)).product();
    let kernel = TripleKernel::new(&eq, values, n);
    let reach = n as i64;
    let mut value = 0.0;
    for a in -2 * reach..=2 * reach {
        for b in -2 * reach..=2 * reach {
            let mut t = [0, a, b];
            t.sort();
            if t[1] - t[0] <= reach && t[2] - t[1] <= reach {
                value += kernel.term(a, b);
            }
        }
    }
    Ok(CorrelationReport {
        value,
        truncation: n,
        tail_bound: norms * triple_tail(eq.gap(), n),
    })
}

/// The direct estimator `(1/n) ∫ (S_n g)² dm` of the variance of a
/// mean-zero function, computed exactly from the lag correlations.
pub fn direct_variance(
    g: &DepthKFunction<f64>,
    eq: &Equilibrium,
    n: usize,
) -> Result<f64, PressureError> {
    let eq = eq.covering(&[g])?;
    check_mean_zero(&eq, g)?;
    let v = eq.values_of(g)?;
    let c = lagged(&eq, &v, &v, n.saturating_sub(1));
    let nf = n as f64;
    Ok(c[0] + 2.0 * (1..n).map(|j| (1.0 - j as f64 / nf) * c[j]).sum::<f64>())
}

/// The direct estimator `(1/n) ∫ S_n g₁ · S_n g₂ · S_n g₃ dm` of the
/// third-order correlation sum, computed exactly from three-point
/// correlations.
pub fn direct_triple(
    g1: &DepthKFunction<f64>,
    g2: &DepthKFunction<f64>,
    g3: &DepthKFunction<f64>,
    eq: &Equilibrium,
    n: usize,
) -> Result<f64, PressureError> {
    let eq = eq.covering(&[g1, g2, g3])?;
    for g in [g1, g2, g3] {
        check_mean_zero(&eq, g)?;
    }
    let values = [eq.values_of(g1)?, eq.values_of(g2)?, eq.values_of(g3)?];
    let kernel = TripleKernel::new(&eq, values, n);
    let span = n as i64;
    let mut total = 0.0;
    // Σ_{i,j,k<n} E[g₁(σⁱ) g₂(σʲ) g₃(σᵏ)]: the offsets (j − i, k − i) occur
    // n − spread times.
    for a in -span..span {
        for b in -span..span {
            let lo = 0.min(a).min(b);
            let hi = 0.max(a).max(b);
            let spread = hi - lo;
            if spread < span {
                total += (span - spread) as f64 * kernel.term(a, b);
            }
        }
    }
    Ok(total / n as f64)
}
