//! Ruelle transfer operators on shifts of finite type.
//!
//! For a potential `w` that depends on the first `k` symbols, the transfer
//! operator
//!
//! ```text
//! (L_w f)(x) = Σ_{σy = x} e^{w(y)} f(y)
//! ```
//!
//! maps depth-`k` functions to depth-`k` functions, so it is a finite
//! nonnegative matrix indexed by admissible `k`-words. On a mixing shift the
//! Ruelle–Perron–Frobenius theorem gives a simple leading eigenvalue `ρ`
//! with a positive eigenfunction `h` and a positive adjoint eigenvector `μ`.
//! The pressure is `P(w) = log ρ` and the equilibrium measure of `w` gives
//! the cylinder `[u]` mass `h(u) μ(u)`.

mod error;
mod matrix;
mod measure;
mod projection;
mod rpf;

pub use error::TransferError;
pub use matrix::RuelleMatrix;
pub use measure::{equilibrium_measure, MarkovMeasure};
pub use projection::{transfer_with_projection, ProjectedTransfer};
pub use rpf::{
    normalize_potential, pressure, rpf, rpf_with, RpfData, DEFAULT_MAX_ITER, DEFAULT_TOL,
};
