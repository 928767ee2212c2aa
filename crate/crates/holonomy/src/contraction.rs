use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::HolonomyError;

/// A unit tangent vector of the Poincaré disk: a base point `p` with
/// `|p| < 1` and the Euclidean angle `θ` of the direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitTangent {
    /// Base point.
    pub point: Complex64,
    /// Direction angle.
    pub angle: f64,
}

impl UnitTangent {
    /// A unit tangent vector; fails unless `|p| < 1` and both are finite.
    pub fn new(point: Complex64, angle: f64) -> Result<Self, HolonomyError> {
        if !(point.norm() < 1.0) || !angle.is_finite() {
            return Err(HolonomyError::InvalidInput(format!("tangent vector at {point} with angle {angle}")));
        }
        Ok(UnitTangent { point, angle })
    }

    /// The geodesic flow `Φ_s`.
    ///
    /// The Möbius map `z ↦ (z + p)/(1 + p̄z)` carries the geodesic through
    /// `0` in direction `θ` to the one through `p`; at `0` the flow reaches
    /// `e^{iθ} tanh(s/2)`, and the map rotates directions by
    /// `−2 arg(1 + p̄z)`.
    pub fn flow(&self, s: f64) -> UnitTangent {
        let w = Complex64::from_polar((0.5 * s).tanh(), self.angle);
        let p = self.point;
        let denom = Complex64::new(1.0, 0.0) + p.conj() * w;
        UnitTangent {
            point: (w + p) / denom,
            angle: self.angle - 2.0 * denom.arg(),
        }
    }
}

/// Hyperbolic distance `2 artanh |(p − q)/(1 − q̄p)|` in the disk.
pub fn hyperbolic_distance(p: Complex64, q: Complex64) -> f64 {
    let r = ((p - q) / (Complex64::new(1.0, 0.0) - q.conj() * p)).norm();
    2.0 * r.min(1.0 - f64::EPSILON).atanh()
}

fn wrap_angle(a: f64) -> f64 {
    let r = (a + PI).rem_euclid(2.0 * PI) - PI;
    if r == -PI {
        PI
    } else {
        r
    }
}

/// Sasaki-type distance `√(d(p, q)² + Δ²)`, where `Δ` is the angle between
/// the direction at `p` and the direction at `q` moved to `p` by the
/// hyperbolic translation along the geodesic from `q` to `p`.
///
/// That translation is `M_q ∘ T_w ∘ M_{−q}` with `w = (p − q)/(1 − q̄p)`;
/// the outer Möbius map rotates directions by `−2 arg(1 + q̄w)` and the
/// other two factors do not rotate at their base points.
pub fn sasaki_distance(x: &UnitTangent, y: &UnitTangent) -> f64 {
    let (p, q) = (x.point, y.point);
    let one = Complex64::new(1.0, 0.0);
    let w = (p - q) / (one - q.conj() * p);
    let moved = y.angle - 2.0 * (one + q.conj() * w).arg();
    let d = hyperbolic_distance(p, q);
    let delta = wrap_angle(x.angle - moved);
    (d * d + delta * delta).sqrt()
}

/// `d(Φ_s x, Φ_s y) / (e^s d(x, y))` for the Sasaki-type distance.
pub fn flow_contraction_check(x: &UnitTangent, y: &UnitTangent, s: f64) -> Result<f64, HolonomyError> {
    if !(s >= 0.0) || !s.is_finite() {
        return Err(HolonomyError::InvalidInput(format!("flow time {s}")));
    }
    let d0 = sasaki_distance(x, y);
    if d0 == 0.0 {
        return Err(HolonomyError::InvalidInput("coincident tangent vectors".into()));
    }
    Ok(sasaki_distance(&x.flow(s), &y.flow(s)) / (s.exp() * d0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tangent(re: f64, im: f64, angle: f64) -> UnitTangent {
        UnitTangent::new(Complex64::new(re, im), angle).unwrap()
    }

    #[test]
    fn flow_moves_at_unit_speed_and_composes() {
        let x = tangent(0.3, -0.2, 1.1);
        for s in [0.1, 0.8, 2.5] {
            let d = hyperbolic_distance(x.point, x.flow(s).point);
            assert!((d - s).abs() < 1e-12);
            let twice = x.flow(s).flow(0.7);
            let once = x.flow(s + 0.7);
            assert!((twice.point - once.point).norm() < 1e-12);
            assert!(wrap_angle(twice.angle - once.angle).abs() < 1e-12);
        }
    }

    #[test]
    fn same_geodesic_pairs_keep_their_distance() {
        let x = tangent(-0.1, 0.4, 0.3);
        let y = x.flow(0.05);
        let d0 = sasaki_distance(&x, &y);
        assert!((d0 - 0.05).abs() < 1e-12);
        for s in [0.0, 1.0, 4.0] {
            let r = flow_contraction_check(&x, &y, s).unwrap();
            assert!(r <= 1.0 + 1e-9, "s = {s}: {r}");
        }
    }

    #[test]
    fn distance_is_symmetric() {
        let x = tangent(0.2, 0.1, 0.4);
        let y = tangent(-0.3, 0.25, 2.0);
        assert!((sasaki_distance(&x, &y) - sasaki_distance(&y, &x)).abs() < 1e-12);
        assert_eq!(sasaki_distance(&x, &x), 0.0);
    }

    #[test]
    fn coincident_pair_is_rejected() {
        let x = tangent(0.0, 0.0, 0.0);
        assert!(flow_contraction_check(&x, &x, 1.0).is_err());
        assert!(UnitTangent::new(Complex64::new(1.0, 0.0), 0.0).is_err());
    }
}
