//! Suspension flows over shifts of finite type.
//!
//! Over a shift `σ` with a positive roof function `r`, the suspension space
//! is `{(x, t) : 0 ≤ t ≤ r(x)}` with `(x, r(x))` glued to `(σx, 0)`, and the
//! flow moves up each fiber at unit speed. A flow function `F(x, t)`
//! integrates along fibers to a base function
//!
//! ```text
//! F̂(x) = ∫₀^{r(x)} F(x, t) dt
//! ```
//!
//! and the flow pressure of `F` is the unique `c` with `P(F̂ − c r) = 0`,
//! where `P` is the shift pressure. Invariant measures correspond through
//! `dm dt / ∫ r dm`.
//!
//! Along a family `F_s` the derivatives of the flow pressure are computed
//! on the shift from the pressure derivative formulas of `pressure_calc`,
//! divided by `∫ r dm`, and checked against finite differences of the flow
//! pressure itself.

mod error;
mod family;
mod flow;
mod quadrature;
mod root;

pub use error::SuspensionError;
pub use family::{
    flow_pressure_curve, flow_pressure_derivative_transfer, DerivativePair, FlowFamily, TripleSetup,
    FLOW_FD_STEPS,
};
pub use flow::{
    flow_measure_factor, hat_function, FiberProfile, FlowFunction, FlowFunctionSpec, Period, RoofTag,
    SuspensionFlow,
};
pub use quadrature::{GaussLegendre, DEFAULT_QUADRATURE_ORDER};
pub use root::{flow_pressure, flow_pressure_of_hat, FlowPressure, BISECTION_WIDTH, RESIDUAL_TARGET};
