use sft::SftError;
use thiserror::Error;

/// Errors raised by transfer-operator computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum TransferError {
    /// The shift is not topologically mixing, so RPF theory does not apply.
    #[error("the shift is not topologically mixing")]
    NotMixing,
    /// Power iteration did not reach the requested tolerance.
    #[error("power iteration did not converge in {max_iter} iterations (residual {residual:e})")]
    NoConvergence { max_iter: usize, residual: f64 },
    /// The leading eigenfunction has a non-positive entry.
    #[error("eigenfunction has a non-positive entry ({value:e})")]
    NonPositiveEigenfunction { value: f64 },
    /// The potential does not satisfy `L_w 1 = 1`.
    #[error("potential is not normalized (max |L1 − 1| = {deviation:e})")]
    NotNormalized { deviation: f64 },
    /// Arguments live on different shifts or incompatible depths.
    #[error(transparent)]
    Sft(#[from] SftError),
}
