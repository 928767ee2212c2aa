use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::HolonomyError;

/// Relative tolerance of adaptive kernel quadrature.
pub const QUADRATURE_TOL: f64 = 1e-12;
/// Tolerance of the periodicity check on a test grid.
pub const PERIODICITY_TOL: f64 = 1e-12;

/// Real or imaginary part of a sampled value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Part {
    /// `Re q`.
    Re,
    /// `Im q`.
    Im,
}

impl Part {
    fn of(self, z: Complex64) -> f64 {
        match self {
            Part::Re => z.re,
            Part::Im => z.im,
        }
    }
}

/// One term `c e^{2πi n t / T}` of a Fourier series, serialized as
/// `[n, re, im]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "(i64, f64, f64)", into = "(i64, f64, f64)")]
pub struct FourierMode {
    /// Frequency index.
    pub n: i64,
    /// Coefficient.
    pub coeff: Complex64,
}

impl From<(i64, f64, f64)> for FourierMode {
    fn from((n, re, im): (i64, f64, f64)) -> Self {
        FourierMode {
            n,
            coeff: Complex64::new(re, im),
        }
    }
}

impl From<FourierMode> for (i64, f64, f64) {
    fn from(m: FourierMode) -> Self {
        (m.n, m.coeff.re, m.coeff.im)
    }
}

/// A complex-valued function of the flow time `t` along an orbit.
#[derive(Clone)]
pub enum Sampler {
    /// `Σ cₙ e^{2πi n t / T}`; kernel integrals are evaluated in closed form.
    Fourier { period: f64, modes: Vec<FourierMode> },
    /// An arbitrary function; kernel integrals use adaptive quadrature.
    Custom(Arc<dyn Fn(f64) -> Complex64 + Send + Sync>),
}

impl fmt::Debug for Sampler {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sampler::Fourier { period, modes } => f
                .debug_struct("Fourier")
                .field("period", period)
                .field("modes", modes)
                .finish(),
            Sampler::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

impl Sampler {
    /// The zero function.
    pub fn zero() -> Self {
        Sampler::Fourier {
            period: 1.0,
            modes: Vec::new(),
        }
    }

    /// A constant function.
    pub fn constant(z: Complex64) -> Self {
        Sampler::Fourier {
            period: 1.0,
            modes: vec![FourierMode { n: 0, coeff: z }],
        }
    }

    /// A finite Fourier series of the given period.
    pub fn fourier(period: f64, modes: Vec<FourierMode>) -> Result<Self, HolonomyError> {
        if !(period > 0.0) || !period.is_finite() {
            return Err(HolonomyError::InvalidInput(format!("period {period}")));
        }
        if modes.iter().any(|m| !m.coeff.re.is_finite() || !m.coeff.im.is_finite()) {
            return Err(HolonomyError::InvalidInput("non-finite Fourier coefficient".into()));
        }
        Ok(Sampler::Fourier { period, modes })
    }

    /// An arbitrary function of `t`.
    pub fn from_fn(f: impl Fn(f64) -> Complex64 + Send + Sync + 'static) -> Self {
        Sampler::Custom(Arc::new(f))
    }

    /// Whether the sampler is identically zero by construction.
    pub fn is_zero(&self) -> bool {
        matches!(self, Sampler::Fourier { modes, .. } if modes.iter().all(|m| m.coeff == Complex64::new(0.0, 0.0)))
    }

    /// `q(t)`.
    pub fn eval(&self, t: f64) -> Complex64 {
        match self {
            Sampler::Fourier { period, modes } => modes
                .iter()
                .map(|m| m.coeff * Complex64::from_polar(1.0, 2.0 * PI * m.n as f64 * t / period))
                .sum(),
            Sampler::Custom(f) => f(t),
        }
    }

    /// An upper bound for `sup |q|`: the coefficient sum for Fourier
    /// series, the maximum over `grid` for other samplers.
    pub fn sup_bound(&self, grid: &[f64]) -> f64 {
        match self {
            Sampler::Fourier { modes, .. } => modes.iter().map(|m| m.coeff.norm()).sum(),
            Sampler::Custom(f) => grid.iter().map(|&t| f(t).norm()).fold(0.0, f64::max),
        }
    }

    /// `∫_a^b e^{k(s − c)} part(q(s)) ds`.
    ///
    /// Writing the exponent relative to `c` keeps the kernels of the
    /// second-variation formulas bounded when `a`, `b` and `c` are large.
    pub fn kernel(&self, k: f64, c: f64, part: Part, a: f64, b: f64) -> Result<f64, HolonomyError> {
        match self {
            Sampler::Fourier { period, modes } => {
                let mut total = Complex64::new(0.0, 0.0);
                for m in modes {
                    let omega = 2.0 * PI * m.n as f64 / period;
                    let z = Complex64::new(k, omega);
                    let integral = if z.norm() == 0.0 {
                        Complex64::new(b - a, 0.0)
                    } else {
                        let upper = Complex64::new(k * (b - c), omega * b).exp();
                        let lower = Complex64::new(k * (a - c), omega * a).exp();
                        (upper - lower) / z
                    };
                    total += m.coeff * integral;
                }
                Ok(part.of(total))
            }
            Sampler::Custom(f) => {
                if a == b {
                    return Ok(0.0);
                }
                let g = |s: f64| (k * (s - c)).exp() * part.of(f(s));
                let out = quadrature::double_exponential::integrate(g, a, b, QUADRATURE_TOL);
                let scale = out.integral.abs().max(1.0);
                if !out.integral.is_finite() || out.error_estimate > 1e3 * QUADRATURE_TOL * scale {
                    return Err(HolonomyError::QuadratureFailure {
                        estimate: out.error_estimate,
                    });
                }
                Ok(out.integral)
            }
        }
    }

    /// Largest `|q(t + period) − q(t)|` over a 64-point grid on
    /// `[0, period)`, relative to `max(1, |q(t)|)`.
    pub fn periodicity_defect(&self, period: f64) -> f64 {
        (0..64)
            .map(|k| {
                let t = period * k as f64 / 64.0;
                let a = self.eval(t);
                (self.eval(t + period) - a).norm() / a.norm().max(1.0)
            })
            .fold(0.0, f64::max)
    }
}

/// Samplers along one closed orbit of length `l`: two cubic differentials
/// `q_α`, `q_β` and two quadratic differentials `q_i`, `q_j`, each evaluated
/// along the unit-speed geodesic. Unset samplers are zero.
#[derive(Debug, Clone)]
pub struct OrbitData {
    l: f64,
    /// Cubic sampler `q_α`.
    pub q_alpha: Sampler,
    /// Cubic sampler `q_β`.
    pub q_beta: Sampler,
    /// Quadratic sampler `q_i`.
    pub q_i: Sampler,
    /// Quadratic sampler `q_j`.
    pub q_j: Sampler,
}

/// Serialized orbit: the length and the Fourier modes of each sampler.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitSpec {
    /// Orbit length.
    pub l: f64,
    /// Modes per sampler, keyed by `q_alpha`, `q_beta`, `q_i`, `q_j`. The
    /// series period is `l`.
    pub fourier_coeffs: BTreeMap<String, Vec<FourierMode>>,
}

const SAMPLER_NAMES: [&str; 4] = ["q_alpha", "q_beta", "q_i", "q_j"];

impl OrbitData {
    /// An orbit of length `l > 0` with all samplers zero.
    pub fn new(l: f64) -> Result<Self, HolonomyError> {
        if !(l > 0.0) || !l.is_finite() {
            return Err(HolonomyError::InvalidInput(format!("orbit length {l}")));
        }
        Ok(OrbitData {
            l,
            q_alpha: Sampler::zero(),
            q_beta: Sampler::zero(),
            q_i: Sampler::zero(),
            q_j: Sampler::zero(),
        })
    }

    /// Sets `q_α`.
    pub fn with_alpha(mut self, q: Sampler) -> Self {
        self.q_alpha = q;
        self
    }

    /// Sets `q_β`.
    pub fn with_beta(mut self, q: Sampler) -> Self {
        self.q_beta = q;
        self
    }

    /// Sets `q_i`.
    pub fn with_i(mut self, q: Sampler) -> Self {
        self.q_i = q;
        self
    }

    /// Sets `q_j`.
    pub fn with_j(mut self, q: Sampler) -> Self {
        self.q_j = q;
        self
    }

    /// Orbit length.
    pub fn length(&self) -> f64 {
        self.l
    }

    /// The same samplers on the `k`-fold traversal, of length `k l`.
    pub fn repeated(&self, k: usize) -> Result<Self, HolonomyError> {
        if k == 0 {
            return Err(HolonomyError::InvalidInput("zero traversals".into()));
        }
        let mut out = self.clone();
        out.l *= k as f64;
        Ok(out)
    }

    fn samplers(&self) -> [&Sampler; 4] {
        [&self.q_alpha, &self.q_beta, &self.q_i, &self.q_j]
    }

    /// Checks `q(t + l) = q(t)` on a test grid for every sampler.
    pub fn check_periodic(&self) -> Result<(), HolonomyError> {
        for (name, q) in SAMPLER_NAMES.iter().zip(self.samplers()) {
            let defect = q.periodicity_defect(self.l);
            if defect > PERIODICITY_TOL {
                return Err(HolonomyError::NotPeriodic {
                    name: (*name).into(),
                    period: self.l,
                    defect,
                });
            }
        }
        Ok(())
    }

    /// Builds an orbit from its serialized form.
    pub fn from_spec(spec: &OrbitSpec) -> Result<Self, HolonomyError> {
        for key in spec.fourier_coeffs.keys() {
            if !SAMPLER_NAMES.contains(&key.as_str()) {
                return Err(HolonomyError::InvalidInput(format!("unknown sampler {key}")));
            }
        }
        let get = |name: &str| -> Result<Sampler, HolonomyError> {
            match spec.fourier_coeffs.get(name) {
                Some(modes) => Sampler::fourier(spec.l, modes.clone()),
                None => Ok(Sampler::zero()),
            }
        };
        Ok(OrbitData::new(spec.l)?
            .with_alpha(get("q_alpha")?)
            .with_beta(get("q_beta")?)
            .with_i(get("q_i")?)
            .with_j(get("q_j")?))
    }

    /// The serialized form; fails for non-Fourier samplers or series whose
    /// period differs from the orbit length.
    pub fn to_spec(&self) -> Result<OrbitSpec, HolonomyError> {
        let mut fourier_coeffs = BTreeMap::new();
        for (name, q) in SAMPLER_NAMES.iter().zip(self.samplers()) {
            match q {
                Sampler::Fourier { modes, .. } if modes.is_empty() => {}
                Sampler::Fourier { period, modes } => {
                    let ratio = self.l / period;
                    if (ratio - ratio.round()).abs() > 1e-12 {
                        return Err(HolonomyError::InvalidInput(format!(
                            "sampler {name} has period {period}, not dividing {}",
                            self.l
                        )));
                    }
                    let r = ratio.round() as i64;
                    let rescaled = modes.iter().map(|m| FourierMode { n: m.n * r, coeff: m.coeff }).collect();
                    fourier_coeffs.insert((*name).to_string(), rescaled);
                }
                Sampler::Custom(_) => {
                    return Err(HolonomyError::InvalidInput(format!("sampler {name} is not a Fourier series")))
                }
            }
        }
        Ok(OrbitSpec { l: self.l, fourier_coeffs })
    }
}
