use thiserror::Error;

/// Errors raised by holonomy computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum HolonomyError {
    /// The Richardson estimate of the RK4 error exceeds the tolerance.
    #[error("RK4 step too large (Richardson estimate {estimate:e})")]
    StepTooLarge { estimate: f64 },
    /// The top two eigenvalue moduli are too close to separate.
    #[error("degenerate holonomy spectrum (relative gap {gap:e})")]
    DegenerateSpectrum { gap: f64 },
    /// Adaptive quadrature did not reach its tolerance.
    #[error("quadrature failed to converge (error estimate {estimate:e})")]
    QuadratureFailure { estimate: f64 },
    /// A sampler is not periodic with the orbit length.
    #[error("sampler {name} is not {period}-periodic (defect {defect:e})")]
    NotPeriodic { name: String, period: f64, defect: f64 },
    /// Malformed input.
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
