use sft::SftError;
use thiserror::Error;
use transfer::TransferError;

/// Errors raised by correlation and pressure-derivative computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum PressureError {
    /// A function required to be mean-zero is not.
    #[error("function is not mean-zero (mean {mean:e})")]
    NotMeanZero { mean: f64 },
    /// A hypothesis of a derivative formula fails at the base point.
    #[error("hypothesis violated: {hypothesis} (value {value:e})")]
    HypothesisViolated { hypothesis: String, value: f64 },
    /// The pressure-metric denominator `∫ F dm` is numerically zero.
    #[error("degenerate denominator ∫F dm = {value:e}")]
    DegenerateDenominator { value: f64 },
    /// A family has the wrong number of parameters for the operation.
    #[error("expected a {expected}-parameter family, found {found} parameters")]
    ParameterCount { expected: usize, found: usize },
    /// A derivative order or multi-index outside the supported range.
    #[error("unsupported derivative: {0}")]
    UnsupportedDerivative(String),
    /// Failure in the transfer-operator layer.
    #[error(transparent)]
    Transfer(#[from] TransferError),
    /// Shift or depth mismatch.
    #[error(transparent)]
    Sft(#[from] SftError),
}
