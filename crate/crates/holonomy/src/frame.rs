use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;

use crate::HolonomyError;

/// Complex 3-vectors.
pub type Vec3 = Vector3<Complex64>;
/// Complex 3×3 matrices.
pub type Mat3 = Matrix3<Complex64>;

/// Relative gap between the top two eigenvalue moduli below which the
/// spectrum counts as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-9;

pub(crate) fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// The connection matrix `M` of the base flat connection along a closed
/// geodesic in the holomorphic frame: parallel sections solve `V' + M V = 0`.
pub fn connection_matrix() -> Mat3 {
    Mat3::new(
        c(0.0), c(0.5), c(0.0),
        c(1.0), c(0.0), c(0.5),
        c(0.0), c(1.0), c(0.0),
    )
}

/// Diagonal of the Hermitian metric `H = diag(h⁻¹, 1, h)` with `h = 1/2`.
pub const HERMITIAN_DIAGONAL: [f64; 3] = [2.0, 1.0, 0.5];

/// `H(a, b) = Σ conj(aₖ) Hₖₖ bₖ`, conjugate-linear in the first slot.
pub fn h_pairing(a: &Vec3, b: &Vec3) -> Complex64 {
    (0..3).map(|k| a[k].conj() * HERMITIAN_DIAGONAL[k] * b[k]).sum()
}

/// Growth rate `μᵢ` of the parallel eigenvector `eᵢ(t) = e^{μᵢ t} eᵢ(0)`.
pub(crate) const GROWTH: [f64; 3] = [1.0, 0.0, -1.0];

fn eigenvector_at_zero(i: usize) -> [f64; 3] {
    let r = FRAC_1_SQRT_2;
    match i {
        1 => [r * 0.5, -r, r],
        2 => [-0.5, 0.0, 1.0],
        _ => [r * 0.5, r, r],
    }
}

/// Per eigenvector: column `i` of `a(0)` and `eᵢ(0)` with their `1/√2`
/// factors removed, and the product of the removed factors.
const PROJECTION_DYADS: [([f64; 3], [f64; 3], f64); 3] = [
    ([1.0, -1.0, 0.5], [0.5, -1.0, 1.0], 0.5),
    ([-1.0, 0.0, 0.5], [-0.5, 0.0, 1.0], 1.0),
    ([1.0, 1.0, 0.5], [0.5, 1.0, 1.0], 0.5),
];

/// The parallel eigenframe of the base connection along a closed geodesic of
/// length `l`: eigenvalues `(eˡ, 1, e⁻ˡ)`, eigenvectors `eᵢ(t)`, the inverse
/// change of basis `a(t)` and the projection `π(t)` onto `e₁` along
/// `span(e₂, e₃)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaseFrame {
    l: f64,
}

impl BaseFrame {
    /// The frame along a geodesic of length `l > 0`.
    pub fn new(l: f64) -> Result<Self, HolonomyError> {
        if !(l > 0.0) || !l.is_finite() {
            return Err(HolonomyError::InvalidInput(format!("orbit length {l}")));
        }
        let gap = -(-l).exp_m1();
        if gap < DEGENERACY_TOL {
            return Err(HolonomyError::DegenerateSpectrum { gap });
        }
        Ok(BaseFrame { l })
    }

    /// Orbit length.
    pub fn length(&self) -> f64 {
        self.l
    }

    /// Holonomy eigenvalues `(eˡ, 1, e⁻ˡ)`.
    pub fn eigenvalues(&self) -> [f64; 3] {
        [self.l.exp(), 1.0, (-self.l).exp()]
    }

    /// The eigenvalue `λᵢ` for `i ∈ {1, 2, 3}`.
    pub fn eigenvalue(&self, i: usize) -> f64 {
        self.eigenvalues()[i - 1]
    }

    /// The parallel eigenvector `eᵢ(t)`, `i ∈ {1, 2, 3}`, with unit
    /// `H`-norm at `t = 0`.
    pub fn eigenvector(&self, i: usize, t: f64) -> Vec3 {
        let s = (GROWTH[i - 1] * t).exp();
        let v = eigenvector_at_zero(i);
        Vec3::new(c(s * v[0]), c(s * v[1]), c(s * v[2]))
    }

    /// The matrix `E(t)` with rows `eⱼ(t)`, so `E_{jk} = e_{jk}`.
    pub fn eigenvector_matrix(&self, t: f64) -> Mat3 {
        Mat3::from_rows(&[
            self.eigenvector(1, t).transpose(),
            self.eigenvector(2, t).transpose(),
            self.eigenvector(3, t).transpose(),
        ])
    }

    /// The change of basis `a(t)` with `sᵢ = Σⱼ a_{ij} eⱼ`, so that
    /// `Σⱼ a_{ij} e_{jk} = δ_{ik}`.
    pub fn change_of_basis(&self, t: f64) -> Mat3 {
        let r = FRAC_1_SQRT_2;
        let (em, ep) = ((-t).exp(), t.exp());
        Mat3::new(
            c(r * em), c(-1.0), c(r * ep),
            c(-r * em), c(0.0), c(r * ep),
            c(0.5 * r * em), c(0.5), c(0.5 * r * ep),
        )
    }

    /// The projection onto `eᵢ(t)` along the other two eigenvectors, in the
    /// holomorphic frame: column `k` is `a_{ki} eᵢ(t)`.
    ///
    /// The factors `e^{±μᵢ t}` of `a_{ki}(t)` and `eᵢ(t)` cancel, and for
    /// `i = 1, 3` their two `1/√2` normalizations multiply to `½`, so the
    /// entries are dyadic rationals and are formed without rounding.
    pub fn projection_onto(&self, i: usize, _t: f64) -> Mat3 {
        let (column, vector, weight) = PROJECTION_DYADS[i - 1];
        Mat3::from_fn(|row, col| c(weight * column[col] * vector[row]))
    }

    /// The projection `π(t)` onto the top eigenline.
    pub fn projection(&self, t: f64) -> Mat3 {
        self.projection_onto(1, t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &Mat3, b: &Mat3, tol: f64) -> bool {
        (a - b).iter().all(|z| z.norm() < tol)
    }

    #[test]
    fn eigenvectors_are_parallel() {
        let f = BaseFrame::new(2.3).unwrap();
        let m = connection_matrix();
        for i in 1..=3 {
            for k in 0..20 {
                let t = 0.1 * k as f64;
                let de = f.eigenvector(i, t) * c(GROWTH[i - 1]);
                let r = de + m * f.eigenvector(i, t);
                assert!(r.norm() < 1e-12, "i = {i}, t = {t}");
            }
            let lam = f.eigenvalue(i);
            assert!((f.eigenvector(i, f.length()) - f.eigenvector(i, 0.0) * c(lam)).norm() < 1e-12);
        }
    }

    #[test]
    fn eigenvectors_are_orthonormal() {
        let f = BaseFrame::new(1.0).unwrap();
        for i in 1..=3 {
            for j in 1..=3 {
                let p = h_pairing(&f.eigenvector(i, 0.0), &f.eigenvector(j, 0.0));
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((p - want).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn change_of_basis_inverts_eigenvectors() {
        let f = BaseFrame::new(1.7).unwrap();
        for t in [0.0, 0.4, 1.7] {
            let prod = f.change_of_basis(t) * f.eigenvector_matrix(t);
            assert!(close(&prod, &Mat3::identity(), 1e-14));
        }
    }

    #[test]
    fn projection_matches_closed_form_matrix() {
        let f = BaseFrame::new(0.9).unwrap();
        let expected = Mat3::new(
            c(0.25), c(-0.25), c(0.125),
            c(-0.5), c(0.5), c(-0.25),
            c(0.5), c(-0.5), c(0.25),
        );
        for t in [0.0, 0.3, 0.9] {
            let p = f.projection(t);
            assert!(close(&p, &expected, 1e-15));
            assert!(close(&(p * p), &p, 1e-15));
        }
        let p = f.projection(0.0);
        assert!((p.trace() - 1.0).norm() < 1e-15);
        assert!((p * f.eigenvector(1, 0.0) - f.eigenvector(1, 0.0)).norm() < 1e-15);
        assert!((p * f.eigenvector(2, 0.0)).norm() < 1e-15);
        assert!((p * f.eigenvector(3, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn projections_match_the_change_of_basis_products() {
        let f = BaseFrame::new(2.1).unwrap();
        for i in 1..=3 {
            for t in [0.0, 0.7, 2.1] {
                let e = f.eigenvector(i, t);
                let a = f.change_of_basis(t);
                let direct = Mat3::from_fn(|row, col| a[(col, i - 1)] * e[row]);
                assert!(close(&f.projection_onto(i, t), &direct, 1e-14), "i = {i}, t = {t}");
            }
        }
        let expected = Mat3::new(
            c(0.25), c(-0.25), c(0.125),
            c(-0.5), c(0.5), c(-0.25),
            c(0.5), c(-0.5), c(0.25),
        );
        let p = f.projection(0.0);
        assert_eq!(p, expected);
        assert_eq!(p * p, p);
    }

    #[test]
    fn projections_sum_to_identity_and_commute_with_m() {
        let f = BaseFrame::new(1.3).unwrap();
        let sum = f.projection_onto(1, 0.5) + f.projection_onto(2, 0.5) + f.projection_onto(3, 0.5);
        assert!(close(&sum, &Mat3::identity(), 1e-14));
        let m = connection_matrix();
        let p = f.projection(0.0);
        assert!(close(&(m * p), &(p * m), 1e-15));
    }

    #[test]
    fn invalid_lengths_are_rejected() {
        assert!(BaseFrame::new(0.0).is_err());
        assert!(matches!(BaseFrame::new(1e-12), Err(HolonomyError::DegenerateSpectrum { .. })));
    }
}
