use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::DiskError;
use crate::expansion::DifferentialExpansion;

/// Rotation average of `Re e₁(x) · Re e₂(Φ_t x) · Re e₃(Φ_s x)` over the
/// direction `θ` of `x`, as a double series in `T = tanh|t|`, `S = tanh|s|`:
///
/// `¼ (1−T²)^{d₂} (1−S²)^{d₃} [Σₙ Xₙ Tⁿ S^{n+k₁} + Σₘ Yₘ T^{m+k₂} Sᵐ]`
///
/// with `Xₙ = Re(x₀ yₙ z̄_{n+k₁})`, `Yₘ = Re(x₀ ȳ_{m+k₂} zₘ)`,
/// `k₁ = d₁ + d₂ − d₃` and `k₂ = d₁ + d₃ − d₂`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TripleSeries {
    pub degrees: [u32; 3],
    pub k1: usize,
    pub k2: usize,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl TripleSeries {
    /// Value at signed flow times `t` and `s`.
    pub fn eval(&self, t: f64, s: f64) -> f64 {
        let (big_t, big_s) = (t.abs().tanh(), s.abs().tanh());
        let (ct, cs) = (1.0 / t.cosh().powi(2), 1.0 / s.cosh().powi(2));
        let pre = 0.25 * ct.powi(self.degrees[1] as i32) * cs.powi(self.degrees[2] as i32);
        let sign = |neg: bool, p: usize| if neg && p % 2 == 1 { -1.0 } else { 1.0 };
        let (tn, sn) = (t < 0.0, s < 0.0);
        let mut acc = 0.0;
        for (n, xn) in self.x.iter().enumerate() {
            let sg = sign(tn, n) * sign(sn, n + self.k1);
            acc += sg * xn * big_t.powi(n as i32) * big_s.powi((n + self.k1) as i32);
        }
        for (m, ym) in self.y.iter().enumerate() {
            let sg = sign(tn, m + self.k2) * sign(sn, m);
            acc += sg * ym * big_t.powi((m + self.k2) as i32) * big_s.powi(m as i32);
        }
        pre * acc
    }

    /// Whether the series vanishes identically.
    pub fn is_zero(&self) -> bool {
        self.x.iter().chain(&self.y).all(|v| *v == 0.0)
    }
}

/// Reduces the rotation-averaged triple product of three expansions to the
/// coefficient families of [`TripleSeries`]. Only `x₀` of the first
/// expansion enters, since it sits at the base point.
pub fn angular_triple_reduce(
    e1: &DifferentialExpansion,
    e2: &DifferentialExpansion,
    e3: &DifferentialExpansion,
) -> Result<TripleSeries, DiskError> {
    let [d1, d2, d3] = [e1.degree(), e2.degree(), e3.degree()].map(|d| d as i64);
    let k1 = d1 + d2 - d3;
    let k2 = d1 + d3 - d2;
    if k1 < 0 || k2 < 0 {
        return Err(DiskError::DegreeMismatch(format!("degrees ({d1}, {d2}, {d3}) give a negative offset")));
    }
    let (k1, k2) = (k1 as usize, k2 as usize);
    let x0 = e1.coeff(0);
    let nx = e2.order().min(e3.order().saturating_sub(k1));
    let x = if e3.order() >= k1 {
        (0..=nx).map(|n| (x0 * e2.coeff(n) * e3.coeff(n + k1).conj()).re).collect()
    } else {
        Vec::new()
    };
    let ny = e3.order().min(e2.order().saturating_sub(k2));
    let y = if e2.order() >= k2 {
        (0..=ny).map(|m| (x0 * e2.coeff(m + k2).conj() * e3.coeff(m)).re).collect()
    } else {
        Vec::new()
    };
    Ok(TripleSeries { degrees: [e1.degree(), e2.degree(), e3.degree()], k1, k2, x, y })
}

/// Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub samples: usize,
}

/// Estimates the rotation average of `Re e₁(x) Re e₂(Φ_t x) Re e₃(Φ_s x)` by
/// sampling the direction of `x` uniformly from a seeded generator.
pub fn monte_carlo_triple(
    e1: &DifferentialExpansion,
    e2: &DifferentialExpansion,
    e3: &DifferentialExpansion,
    t: f64,
    s: f64,
    samples: usize,
    seed: u64,
) -> Result<McEstimate, DiskError> {
    if samples < 2 {
        return Err(DiskError::InvalidInput("at least two samples are needed".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for _ in 0..samples {
        let theta = rng.gen_range(0.0..2.0 * PI);
        let v = e1.eval_on_flow(0.0, theta).re * e2.eval_on_flow(t, theta).re * e3.eval_on_flow(s, theta).re;
        sum += v;
        sum_sq += v * v;
    }
    let n = samples as f64;
    let mean = sum / n;
    let var = ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
    Ok(McEstimate { estimate: mean, stderr: (var / n).sqrt(), samples })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn zero_expansions_give_zero_series() {
        let z3 = DifferentialExpansion::zero(3, 6).unwrap();
        let s = angular_triple_reduce(&z3, &z3, &z3).unwrap();
        assert!(s.is_zero());
        assert_eq!(s.eval(0.4, 0.9), 0.0);
        let mc = monte_carlo_triple(&z3, &z3, &z3, 0.3, 0.5, 100, 1).unwrap();
        assert_eq!(mc.estimate, 0.0);
        assert_eq!(mc.stderr, 0.0);
    }

    #[test]
    fn offsets_follow_degrees() {
        let e = |d| DifferentialExpansion::new(d, vec![Complex64::new(1.0, 0.0); 8]).unwrap();
        let s = angular_triple_reduce(&e(3), &e(3), &e(3)).unwrap();
        assert_eq!((s.k1, s.k2), (3, 3));
        assert_eq!((s.x.len(), s.y.len()), (5, 5));
        let s = angular_triple_reduce(&e(3), &e(3), &e(2)).unwrap();
        assert_eq!((s.k1, s.k2), (4, 2));
        let s = angular_triple_reduce(&e(2), &e(3), &e(3)).unwrap();
        assert_eq!((s.k1, s.k2), (2, 2));
    }
}
