use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::DiskError;

/// Taylor expansion of a holomorphic differential of degree `d` in the disk
/// chart centred at the base point, truncated at order `N`.
///
/// Along the unit-speed geodesic from the origin in direction `θ`, at
/// hyperbolic distance `r`, the differential evaluated on the velocity is
/// `Σ cₙ Rⁿ (1 − R²)ᵈ e^{i(n+d)θ}` with `R = tanh r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawExpansion", into = "RawExpansion")]
pub struct DifferentialExpansion {
    degree: u32,
    coeffs: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct RawExpansion {
    degree: u32,
    coeffs: Vec<Complex64>,
}

impl TryFrom<RawExpansion> for DifferentialExpansion {
    type Error = DiskError;

    fn try_from(raw: RawExpansion) -> Result<Self, DiskError> {
        Self::new(raw.degree, raw.coeffs)
    }
}

impl From<DifferentialExpansion> for RawExpansion {
    fn from(e: DifferentialExpansion) -> Self {
        RawExpansion { degree: e.degree, coeffs: e.coeffs }
    }
}

impl DifferentialExpansion {
    /// Builds an expansion of degree 2 or 3 with finite coefficients.
    pub fn new(degree: u32, coeffs: Vec<Complex64>) -> Result<Self, DiskError> {
        if degree != 2 && degree != 3 {
            return Err(DiskError::DegreeMismatch(format!("degree must be 2 or 3, got {degree}")));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(DiskError::InvalidInput("coefficients must be finite".into()));
        }
        Ok(Self { degree, coeffs })
    }

    /// The all-zero expansion with `order + 1` coefficients.
    pub fn zero(degree: u32, order: usize) -> Result<Self, DiskError> {
        Self::new(degree, vec![Complex64::new(0.0, 0.0); order + 1])
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Truncation order `N`; the coefficients are `c₀..c_N`.
    pub fn order(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient `cₙ`, zero beyond the truncation order.
    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or_default()
    }

    /// Value after flowing for signed time `t` from the origin in direction
    /// `θ`. Negative times flow backwards, which places the point at angle
    /// `θ + π` while the velocity keeps direction `θ`, so `cₙ` picks up `(−1)ⁿ`.
    pub fn eval_on_flow(&self, t: f64, theta: f64) -> Complex64 {
        let r = t.abs();
        let big_r = r.tanh();
        let sech2 = 1.0 / (r.cosh() * r.cosh());
        let sign = if t < 0.0 { -1.0 } else { 1.0 };
        let z = Complex64::from_polar(sign * big_r, theta);
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc * sech2.powi(self.degree as i32) * Complex64::from_polar(1.0, self.degree as f64 * theta)
    }

    /// The expansion seen from the base direction rotated by `π`: the term of
    /// order `n` is multiplied by `e^{i(n+d)π} = (−1)^{n+d}`.
    pub fn rotate_by_pi(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| if (n as u32 + self.degree) % 2 == 0 { *c } else { -c })
            .collect();
        Self { degree: self.degree, coeffs }
    }
}
