use pressure_calc::PressureError;
use sft::SftError;
use thiserror::Error;
use transfer::TransferError;

/// Errors raised by suspension-flow computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SuspensionError {
    /// The roof function has a value that is not strictly positive.
    #[error("roof function must be positive (found {value})")]
    NonPositiveRoof { value: f64 },
    /// The pressure does not change sign on the computed bracket.
    #[error("no sign change of the pressure on [{lo}, {hi}]")]
    BracketingFailed { lo: f64, hi: f64 },
    /// Newton refinement did not reach the residual target.
    #[error("flow pressure root not converged (residual {residual:e})")]
    RootNotConverged { residual: f64 },
    /// A fiber profile or flow-function description is malformed.
    #[error("invalid flow function: {0}")]
    InvalidFlowFunction(String),
    /// A derivative order outside 1..=3.
    #[error("unsupported derivative order {0}")]
    UnsupportedOrder(usize),
    /// Failure in the correlation / derivative layer, including violated
    /// hypotheses.
    #[error(transparent)]
    Pressure(#[from] PressureError),
    /// Failure in the transfer-operator layer.
    #[error(transparent)]
    Transfer(#[from] TransferError),
    /// Shift or depth mismatch.
    #[error(transparent)]
    Sft(#[from] SftError),
}
