//! Correlation functionals and pressure derivatives on shifts of finite type.
//!
//! For a normalized potential `w` with equilibrium measure `m`, the
//! Green–Kubo sums
//!
//! ```text
//! Var(g)          = Σ_{j∈ℤ} ∫ g · g∘σʲ dm
//! Cov(g₁, g₂)     = Σ_{j∈ℤ} ∫ g₁ · g₂∘σʲ dm
//! Σ₃(g₁, g₂, g₃)  = Σ_{n,m∈ℤ} ∫ g₁ · g₂∘σⁿ · g₃∘σᵐ dm
//! ```
//!
//! of mean-zero functions converge geometrically with the spectral gap of the
//! transfer operator. They are evaluated exactly up to a truncation order
//! `N` by powers of the transfer matrix, see [`Equilibrium`].
//!
//! Along a smooth family `f_s` the pressure has
//!
//! ```text
//! P'   = ∫ ∂f dm
//! P''  = Var(∂f) + ∫ ∂²f dm                      (when P' = 0)
//! P''' = Σ₃(∂f, ∂f, ∂f) + 3 Cov(∂f, ∂²f) + ∫ ∂³f dm
//! ```
//!
//! and the mixed analogues for several parameters. Each formula has a
//! finite-difference counterpart in [`fd_oracle`]. The pressure metric
//! `−Cov(∂ᵤF, ∂ᵥF) / ∫ F dm` and its first derivative are assembled from the
//! same pieces.

mod analogue;
mod correlation;
mod derivatives;
mod equilibrium;
mod error;
mod family;
mod metric;

pub use analogue::{decorrelate, entropy_one_base, entropy_one_probabilities};
pub use correlation::{
    covariance, direct_triple, direct_variance, triple_covariance, variance, CorrelationReport,
};
pub use derivatives::{
    derivative_report, fd_oracle, measure_derivative, pressure_d1, pressure_d2,
    pressure_d2_mixed, pressure_d3, pressure_d3_mixed, DerivativeReport, FD_STEP, FD_STEP_THIRD,
    HYPOTHESIS_TOL,
};
pub use equilibrium::{project_mean_zero, Equilibrium};
pub use error::PressureError;
pub use family::{MultiIndex, PolynomialFamily, PotentialFamily};
pub use metric::{covariance_d1, pressure_metric, pressure_metric_d1, MetricReport};
