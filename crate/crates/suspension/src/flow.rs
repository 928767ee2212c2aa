use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sft::{Cylinders, DepthKFunction, Sft, Word};
use transfer::MarkovMeasure;

use crate::{GaussLegendre, SuspensionError, DEFAULT_QUADRATURE_ORDER};

/// A suspension flow: the shift runs under a strictly positive roof `r`,
/// and the flow moves up the fiber `{x} × [0, r(x))` at unit speed before
/// jumping to `(σx, 0)`.
#[derive(Debug, Clone)]
pub struct SuspensionFlow {
    roof: DepthKFunction<f64>,
}

impl SuspensionFlow {
    /// Checks that every roof value is strictly positive.
    pub fn new(roof: DepthKFunction<f64>) -> Result<Self, SuspensionError> {
        let min = roof.min_value();
        if !(min > 0.0) {
            return Err(SuspensionError::NonPositiveRoof { value: min });
        }
        Ok(SuspensionFlow { roof })
    }

    /// The roof function.
    pub fn roof(&self) -> &DepthKFunction<f64> {
        &self.roof
    }

    /// The base shift.
    pub fn sft(&self) -> &Sft {
        self.roof.sft()
    }
}

/// Period of a Fourier fiber profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Period {
    /// The period equals the fiber length `r(x)`; written `"roof"`.
    Roof(RoofTag),
    /// A fixed period.
    Fixed(f64),
}

/// Marker serialized as the string `"roof"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RoofTag {
    /// The fiber length.
    Roof,
}

impl Period {
    /// The period that follows the fiber length.
    pub const ROOF: Period = Period::Roof(RoofTag::Roof);
}

fn default_period() -> Period {
    Period::ROOF
}

/// The profile `t ↦ F(x, t)` on one fiber.
#[derive(Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FiberProfile {
    /// `a₀ + Σ_k (a_k cos(2πkt/T) + b_k sin(2πkt/T))` with
    /// `coeffs = [a₀, a₁, b₁, a₂, b₂, …]`.
    Fourier {
        coeffs: Vec<f64>,
        #[serde(default = "default_period")]
        period: Period,
    },
    /// `Σ_j c_j tʲ` with `coeffs = [c₀, c₁, …]`.
    Polynomial { coeffs: Vec<f64> },
    /// An arbitrary profile; not serializable.
    #[serde(skip)]
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for FiberProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiberProfile::Fourier { coeffs, period } => f
                .debug_struct("Fourier")
                .field("coeffs", coeffs)
                .field("period", period)
                .finish(),
            FiberProfile::Polynomial { coeffs } => {
                f.debug_struct("Polynomial").field("coeffs", coeffs).finish()
            }
            FiberProfile::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

impl FiberProfile {
    /// The constant profile.
    pub fn constant(c: f64) -> Self {
        FiberProfile::Polynomial { coeffs: vec![c] }
    }

    /// `F(t)` on a fiber of length `roof`.
    pub fn eval(&self, roof: f64, t: f64) -> f64 {
        match self {
            FiberProfile::Fourier { coeffs, period } => {
                let p = match period {
                    Period::Roof(_) => roof,
                    Period::Fixed(p) => *p,
                };
                let mut v = coeffs.first().copied().unwrap_or(0.0);
                for (k, pair) in coeffs[1.min(coeffs.len())..].chunks(2).enumerate() {
                    let arg = 2.0 * PI * (k + 1) as f64 * t / p;
                    v += pair[0] * arg.cos() + pair.get(1).copied().unwrap_or(0.0) * arg.sin();
                }
                v
            }
            FiberProfile::Polynomial { coeffs } => coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c),
            FiberProfile::Custom(f) => f(t),
        }
    }

    fn validate(&self) -> Result<(), SuspensionError> {
        match self {
            FiberProfile::Fourier { coeffs, period } => {
                if coeffs.iter().any(|c| !c.is_finite()) {
                    return Err(SuspensionError::InvalidFlowFunction("non-finite Fourier coefficient".into()));
                }
                if let Period::Fixed(p) = period {
                    if !(*p > 0.0) || !p.is_finite() {
                        return Err(SuspensionError::InvalidFlowFunction(format!("period {p}")));
                    }
                }
                Ok(())
            }
            FiberProfile::Polynomial { coeffs } => {
                if coeffs.iter().any(|c| !c.is_finite()) {
                    return Err(SuspensionError::InvalidFlowFunction("non-finite polynomial coefficient".into()));
                }
                Ok(())
            }
            FiberProfile::Custom(_) => Ok(()),
        }
    }
}

/// A function `F(x, t)` on the suspension space that depends on the first
/// `k` symbols of `x` and the height `t` in the fiber, with one
/// [`FiberProfile`] per `k`-cylinder.
#[derive(Debug, Clone)]
pub struct FlowFunction {
    cyl: Arc<Cylinders>,
    fibers: Vec<FiberProfile>,
    quadrature: usize,
}

/// Serialized form of a [`FlowFunction`]: the profile of each cylinder word.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FlowFunctionSpec {
    /// Word length `k` of the cylinders.
    pub depth: usize,
    /// Gauss–Legendre nodes per fiber.
    #[serde(default = "default_quadrature")]
    pub quadrature: usize,
    /// Profile per admissible word.
    pub fibers: BTreeMap<Word, FiberProfile>,
}

fn default_quadrature() -> usize {
    DEFAULT_QUADRATURE_ORDER
}

impl FlowFunction {
    /// One profile per cylinder, in cylinder order.
    pub fn new(cyl: Arc<Cylinders>, fibers: Vec<FiberProfile>) -> Result<Self, SuspensionError> {
        if fibers.len() != cyl.len() {
            return Err(SuspensionError::InvalidFlowFunction(format!(
                "{} profiles for {} cylinders",
                fibers.len(),
                cyl.len()
            )));
        }
        for f in &fibers {
            f.validate()?;
        }
        Ok(FlowFunction {
            cyl,
            fibers,
            quadrature: DEFAULT_QUADRATURE_ORDER,
        })
    }

    /// The same profile on every fiber.
    pub fn uniform(cyl: Arc<Cylinders>, profile: FiberProfile) -> Result<Self, SuspensionError> {
        let n = cyl.len();
        Self::new(cyl, vec![profile; n])
    }

    /// `F(x, t) = f(x[..k], t)` for an arbitrary closure.
    pub fn from_fn(
        cyl: Arc<Cylinders>,
        f: impl Fn(&[usize], f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        let f = Arc::new(f);
        let fibers = cyl
            .words()
            .map(|w| {
                let w = w.to_vec();
                let f = Arc::clone(&f);
                FiberProfile::Custom(Arc::new(move |t| f(&w, t)))
            })
            .collect();
        FlowFunction {
            cyl,
            fibers,
            quadrature: DEFAULT_QUADRATURE_ORDER,
        }
    }

    /// Builds a flow function from its serialized form.
    pub fn from_spec(sft: &Sft, spec: &FlowFunctionSpec) -> Result<Self, SuspensionError> {
        let cyl = Arc::new(Cylinders::new(sft, spec.depth)?);
        let mut fibers = Vec::with_capacity(cyl.len());
        for w in cyl.words() {
            let key = Word::new(w.to_vec());
            let p = spec.fibers.get(&key).ok_or_else(|| {
                SuspensionError::InvalidFlowFunction(format!("no profile for word {key}"))
            })?;
            fibers.push(p.clone());
        }
        if spec.fibers.len() != cyl.len() {
            return Err(SuspensionError::InvalidFlowFunction(format!(
                "{} profiles for {} admissible words",
                spec.fibers.len(),
                cyl.len()
            )));
        }
        Ok(Self::new(cyl, fibers)?.with_quadrature(spec.quadrature))
    }

    /// The serialized form; fails for closure-based profiles.
    pub fn to_spec(&self) -> Result<FlowFunctionSpec, SuspensionError> {
        let mut fibers = BTreeMap::new();
        for (w, p) in self.cyl.words().zip(&self.fibers) {
            if matches!(p, FiberProfile::Custom(_)) {
                return Err(SuspensionError::InvalidFlowFunction(
                    "closure profiles cannot be serialized".into(),
                ));
            }
            fibers.insert(Word::new(w.to_vec()), p.clone());
        }
        Ok(FlowFunctionSpec {
            depth: self.cyl.depth(),
            quadrature: self.quadrature,
            fibers,
        })
    }

    /// Sets the number of Gauss–Legendre nodes per fiber.
    pub fn with_quadrature(mut self, order: usize) -> Self {
        self.quadrature = order.max(1);
        self
    }

    /// Gauss–Legendre nodes per fiber.
    pub fn quadrature(&self) -> usize {
        self.quadrature
    }

    /// Cylinders carrying the profiles.
    pub fn cylinders(&self) -> &Arc<Cylinders> {
        &self.cyl
    }

    /// The profile of the cylinder containing `word` (length ≥ `k`).
    pub fn profile(&self, word: &[usize]) -> Option<&FiberProfile> {
        let k = self.cyl.depth();
        if word.len() < k {
            return None;
        }
        self.cyl.index_of(&word[..k]).map(|i| &self.fibers[i])
    }

    /// `F(x, t)` for `x` starting with `word`, on a fiber of length `roof`.
    pub fn eval(&self, word: &[usize], roof: f64, t: f64) -> Option<f64> {
        self.profile(word).map(|p| p.eval(roof, t))
    }
}

/// `F̂(x) = ∫₀^{r(x)} F(x, t) dt`, by Gauss–Legendre quadrature on each
/// fiber, at the larger of the roof and flow-function depths.
pub fn hat_function(
    flow: &SuspensionFlow,
    f: &FlowFunction,
) -> Result<DepthKFunction<f64>, SuspensionError> {
    if f.cylinders().sft() != flow.sft() {
        return Err(sft::SftError::DepthMismatch("flow function on a different shift".into()).into());
    }
    let depth = flow.roof().depth().max(f.cylinders().depth());
    let roof = flow.roof().promote(depth)?;
    let rule = GaussLegendre::new(f.quadrature());
    let cyl = Arc::clone(roof.cylinders());
    let values = cyl
        .words()
        .zip(roof.values())
        .map(|(w, &r)| {
            let p = f.profile(w).expect("admissible prefix");
            rule.integrate(0.0, r, |t| p.eval(r, t))
        })
        .collect();
    Ok(DepthKFunction::new(cyl, values)?)
}

/// `∫ r dm`, the normalizer of the flow measure `dm dt / ∫ r dm`.
pub fn flow_measure_factor(
    m: &MarkovMeasure,
    roof: &DepthKFunction<f64>,
) -> Result<f64, SuspensionError> {
    Ok(m.integrate(roof)?)
}
