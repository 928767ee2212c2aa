use num_complex::Complex64;

use crate::{HolonomyError, Mat3, Vec3, DEGENERACY_TOL};

/// Default number of RK4 steps per orbit.
pub const DEFAULT_STEPS: usize = 2048;
/// Largest accepted Richardson estimate, relative to `max(1, |V|)`.
pub const RICHARDSON_TOL: f64 = 1e-9;

/// An RK4 solution together with its Richardson error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transported<T> {
    /// Solution computed with the halved step.
    pub value: T,
    /// `|V_h − V_{h/2}| / 15`.
    pub error_estimate: f64,
}

fn rk4_fundamental(a: &dyn Fn(f64) -> Mat3, t_end: f64, steps: usize) -> Mat3 {
    let h = t_end / steps as f64;
    let mut v = Mat3::identity();
    let rhs = |t: f64, v: &Mat3| -(a(t) * v);
    for k in 0..steps {
        let t = k as f64 * h;
        let hc = Complex64::new(h, 0.0);
        let k1 = rhs(t, &v);
        let k2 = rhs(t + 0.5 * h, &(v + k1 * (hc * 0.5)));
        let k3 = rhs(t + 0.5 * h, &(v + k2 * (hc * 0.5)));
        let k4 = rhs(t + h, &(v + k3 * hc));
        v += (k1 + k2 * Complex64::new(2.0, 0.0) + k3 * Complex64::new(2.0, 0.0) + k4) * (hc / 6.0);
    }
    v
}

/// The fundamental solution `Φ(T)` of `V' = −A(t) V` on `[0, T]`, with `Φ(0) = I`.
///
/// RK4 runs with `steps` and `2 steps` steps; the finer solution is returned
/// and the Richardson estimate must stay below [`RICHARDSON_TOL`].
pub fn fundamental_solution(
    a: &dyn Fn(f64) -> Mat3,
    t_end: f64,
    steps: usize,
) -> Result<Transported<Mat3>, HolonomyError> {
    if steps == 0 || !t_end.is_finite() {
        return Err(HolonomyError::InvalidInput(format!("{steps} steps over [0, {t_end}]")));
    }
    let coarse = rk4_fundamental(a, t_end, steps);
    let fine = rk4_fundamental(a, t_end, 2 * steps);
    let error_estimate = (coarse - fine).norm() / 15.0;
    if !(error_estimate <= RICHARDSON_TOL * fine.norm().max(1.0)) {
        return Err(HolonomyError::StepTooLarge { estimate: error_estimate });
    }
    Ok(Transported {
        value: fine,
        error_estimate,
    })
}

/// Parallel transport of `v0` along `V' = −A(t) V` from `0` to `T`.
pub fn parallel_transport(
    a: &dyn Fn(f64) -> Mat3,
    v0: &Vec3,
    t_end: f64,
    steps: usize,
) -> Result<Transported<Vec3>, HolonomyError> {
    let phi = fundamental_solution(a, t_end, steps)?;
    Ok(Transported {
        value: phi.value * v0,
        error_estimate: phi.error_estimate * v0.norm(),
    })
}

/// Iteration cap of the Schur decomposition in [`sorted_eigenvalues`].
pub const SCHUR_MAX_ITER: usize = 10_000;

/// Eigenvalues of a complex 3×3 matrix in strictly decreasing modulus.
///
/// Fails with [`HolonomyError::DegenerateSpectrum`] when the top two moduli
/// differ by less than [`DEGENERACY_TOL`] relative to the largest.
pub fn sorted_eigenvalues(m: &Mat3) -> Result<[Complex64; 3], HolonomyError> {
    let ev = m
        .try_schur(f64::EPSILON, SCHUR_MAX_ITER)
        .and_then(|s| s.eigenvalues())
        .ok_or_else(|| HolonomyError::InvalidInput("eigenvalue iteration failed".into()))?;
    let mut out = [ev[0], ev[1], ev[2]];
    out.sort_by(|a, b| b.norm().total_cmp(&a.norm()));
    let gap = (out[0].norm() - out[1].norm()) / out[0].norm();
    if !(gap >= DEGENERACY_TOL) {
        return Err(HolonomyError::DegenerateSpectrum { gap });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{connection_matrix, BaseFrame};

    #[test]
    fn zero_connection_is_identity() {
        let v0 = Vec3::new(Complex64::new(1.0, 2.0), Complex64::new(0.0, -1.0), Complex64::new(3.0, 0.0));
        let out = parallel_transport(&|_| Mat3::zeros(), &v0, 2.0, 64).unwrap();
        assert_eq!(out.value, v0);
    }

    #[test]
    fn constant_connection_transports_eigenvectors() {
        let l = 2.5;
        let f = BaseFrame::new(l).unwrap();
        let m = connection_matrix();
        for i in 1..=3 {
            let e0 = f.eigenvector(i, 0.0);
            let out = parallel_transport(&|_| m, &e0, l, DEFAULT_STEPS).unwrap();
            let want = e0 * Complex64::new(f.eigenvalue(i), 0.0);
            assert!((out.value - want).norm() < 1e-10 * f.eigenvalue(1), "i = {i}");
        }
    }

    #[test]
    fn monodromy_eigenvalues_are_sorted() {
        let l = 1.2;
        let phi = fundamental_solution(&|_| connection_matrix(), l, DEFAULT_STEPS).unwrap().value;
        let ev = sorted_eigenvalues(&phi).unwrap();
        let want = BaseFrame::new(l).unwrap().eigenvalues();
        for (a, b) in ev.iter().zip(want) {
            assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn coarse_steps_are_rejected() {
        let big = connection_matrix() * Complex64::new(40.0, 0.0);
        let out = fundamental_solution(&|_| big, 1.0, 8);
        assert!(matches!(out, Err(HolonomyError::StepTooLarge { .. })));
        assert!(matches!(
            sorted_eigenvalues(&Mat3::identity()),
            Err(HolonomyError::DegenerateSpectrum { .. })
        ));
    }
}
