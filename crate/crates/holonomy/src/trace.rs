use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::frame::c;
use crate::{
    connection_matrix, fundamental_solution, sorted_eigenvalues, BaseFrame, HolonomyError, Mat3, Sampler,
    DEFAULT_STEPS, PERIODICITY_TOL,
};

/// Default finite-difference step in the family parameter.
pub const FD_STEP: f64 = 1e-3;
/// Default number of Simpson panels for the trace integral.
pub const SIMPSON_PANELS: usize = 2048;

/// The first-order connection perturbation of a cubic differential with
/// value `q` along the orbit.
pub fn cubic_direction(q: Complex64) -> Mat3 {
    let z = c(0.0);
    Mat3::new(
        z, z, q,
        z, z, z,
        q.conj() * 4.0, z, z,
    )
}

/// The first-order connection perturbation of a quadratic differential with
/// value `q` along the orbit.
pub fn quadratic_direction(q: Complex64) -> Mat3 {
    let z = c(0.0);
    let qb = q.conj() * 2.0;
    Mat3::new(
        z, q, z,
        qb, z, q,
        z, qb, z,
    )
}

type MatFn = Arc<dyn Fn(f64) -> Mat3 + Send + Sync>;

/// A one-parameter family of connections `D(s, t) = M + s ∂ₛD(t)` along a
/// closed orbit, described by its derivative at `s = 0`.
#[derive(Clone)]
pub struct ConnectionFamily {
    period: f64,
    derivative: MatFn,
}

impl fmt::Debug for ConnectionFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConnectionFamily").field("period", &self.period).finish_non_exhaustive()
    }
}

impl ConnectionFamily {
    /// A family with an arbitrary derivative of period `period`.
    pub fn from_fn(period: f64, f: impl Fn(f64) -> Mat3 + Send + Sync + 'static) -> Result<Self, HolonomyError> {
        if !(period > 0.0) || !period.is_finite() {
            return Err(HolonomyError::InvalidInput(format!("period {period}")));
        }
        Ok(ConnectionFamily {
            period,
            derivative: Arc::new(f),
        })
    }

    /// The cubic direction of the sampler `q`.
    pub fn cubic(period: f64, q: Sampler) -> Result<Self, HolonomyError> {
        Self::from_fn(period, move |t| cubic_direction(q.eval(t)))
    }

    /// The quadratic direction of the sampler `q`.
    pub fn quadratic(period: f64, q: Sampler) -> Result<Self, HolonomyError> {
        Self::from_fn(period, move |t| quadratic_direction(q.eval(t)))
    }

    /// The family whose derivative is the sum of both derivatives.
    pub fn plus(&self, other: &ConnectionFamily) -> Result<Self, HolonomyError> {
        let (a, b) = (self.derivative.clone(), other.derivative.clone());
        Self::from_fn(self.period, move |t| a(t) + b(t))
    }

    /// The gauge-transformed family `∂ₛD + ġ' + [M, ġ]`.
    pub fn gauge_shifted(&self, g: &GaugeField) -> Result<Self, HolonomyError> {
        let (d, g) = (self.derivative.clone(), g.clone());
        let m = connection_matrix();
        Self::from_fn(self.period, move |t| {
            let gt = g.value(t);
            d(t) + g.derivative(t) + m * gt - gt * m
        })
    }

    /// Period in `t`.
    pub fn period(&self) -> f64 {
        self.period
    }

    /// `∂ₛD(t)`.
    pub fn derivative(&self, t: f64) -> Mat3 {
        (self.derivative)(t)
    }

    /// `M + s ∂ₛD(t)`.
    pub fn connection(&self, s: f64, t: f64) -> Mat3 {
        connection_matrix() + self.derivative(t) * c(s)
    }

    /// Checks `∂ₛD(t + period) = ∂ₛD(t)` on a 64-point grid.
    pub fn check_periodic(&self) -> Result<(), HolonomyError> {
        let defect = (0..64)
            .map(|k| {
                let t = self.period * k as f64 / 64.0;
                let a = self.derivative(t);
                (self.derivative(t + self.period) - a).norm() / a.norm().max(1.0)
            })
            .fold(0.0, f64::max);
        if defect > PERIODICITY_TOL {
            return Err(HolonomyError::NotPeriodic {
                name: "connection derivative".into(),
                period: self.period,
                defect,
            });
        }
        Ok(())
    }
}

/// A periodic infinitesimal gauge transformation
/// `ġ(t) = Σₙ Gₙ e^{2πi n t / T}`.
#[derive(Debug, Clone)]
pub struct GaugeField {
    period: f64,
    modes: Vec<(i64, Mat3)>,
}

impl GaugeField {
    /// A gauge field from its Fourier modes.
    pub fn new(period: f64, modes: Vec<(i64, Mat3)>) -> Result<Self, HolonomyError> {
        if !(period > 0.0) || !period.is_finite() {
            return Err(HolonomyError::InvalidInput(format!("period {period}")));
        }
        Ok(GaugeField { period, modes })
    }

    fn omega(&self, n: i64) -> f64 {
        2.0 * PI * n as f64 / self.period
    }

    /// `ġ(t)`.
    pub fn value(&self, t: f64) -> Mat3 {
        self.modes
            .iter()
            .fold(Mat3::zeros(), |acc, (n, g)| acc + g * Complex64::from_polar(1.0, self.omega(*n) * t))
    }

    /// `ġ'(t)`.
    pub fn derivative(&self, t: f64) -> Mat3 {
        self.modes.iter().fold(Mat3::zeros(), |acc, (n, g)| {
            let w = self.omega(*n);
            acc + g * (Complex64::new(0.0, w) * Complex64::from_polar(1.0, w * t))
        })
    }
}

/// `−∫₀ˡ Tr(∂ₛD(t) π(t)) dt` by composite Simpson with `panels` panels
/// (rounded up to even): the first derivative of `log λ₁(s)` at `s = 0`.
pub fn trace_derivative(
    family: &ConnectionFamily,
    base: &BaseFrame,
    panels: usize,
) -> Result<Complex64, HolonomyError> {
    family.check_periodic()?;
    let l = base.length();
    let n = (panels.max(2) + 1) & !1;
    let h = l / n as f64;
    let f = |t: f64| (family.derivative(t) * base.projection(t)).trace();
    let mut acc = f(0.0) + f(l);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += f(k as f64 * h) * w;
    }
    Ok(-acc * (h / 3.0))
}

/// Complex logarithm of the top eigenvalue of the RK4 monodromy of
/// `V' = −(M + s ∂ₛD) V` over one period.
pub fn log_top_eigenvalue(family: &ConnectionFamily, s: f64, steps: usize) -> Result<Complex64, HolonomyError> {
    let a = |t: f64| family.connection(s, t);
    let phi = fundamental_solution(&a, family.period(), steps)?;
    Ok(sorted_eigenvalues(&phi.value)?[0].ln())
}

/// Five-point central difference of `s ↦ log λ₁(s)` at `s = 0` with step `h`.
pub fn eigenvalue_derivative_fd(family: &ConnectionFamily, h: f64) -> Result<Complex64, HolonomyError> {
    if !(h > 0.0) {
        return Err(HolonomyError::InvalidInput(format!("step {h}")));
    }
    family.check_periodic()?;
    let f = |s: f64| log_top_eigenvalue(family, s, DEFAULT_STEPS);
    Ok((-f(2.0 * h)? + f(h)? * 8.0 - f(-h)? * 8.0 + f(-2.0 * h)?) / (12.0 * h))
}
