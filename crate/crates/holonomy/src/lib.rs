//! Holonomy of the rank-3 flat connection at the Fuchsian point along closed
//! geodesics, and its first and second variations.
//!
//! Along a closed geodesic of length `l` the base connection is `d + M dt`
//! in a holomorphic frame, with parallel eigenvectors `e₁, e₂, e₃` and
//! holonomy eigenvalues `(eˡ, 1, e⁻ˡ)` ([`BaseFrame`]). A cubic or quadratic
//! differential sampled along the orbit ([`OrbitData`]) perturbs the
//! connection by [`cubic_direction`] or [`quadratic_direction`].
//!
//! * [`trace_derivative`] evaluates `−∫ Tr(∂D π)`, checked against
//!   [`eigenvalue_derivative_fd`] on RK4 monodromies.
//! * [`VariationPath`] is the closed-form first variation of each
//!   eigenvector, checked against [`shooting_solution`].
//! * [`second_variation_trace_cc`] and [`trace_mix_cq`] are the mixed
//!   second-variation kernels, checked against [`reassembled_trace`]; their
//!   limits over many traversals are [`eta_cc`] and [`eta_cq`].
//! * [`flow_contraction_check`] measures how the geodesic flow on the unit
//!   tangent bundle of the disk stretches a Sasaki-type distance.

mod contraction;
mod error;
mod frame;
mod sampler;
mod second;
mod trace;
mod transport;
mod variation;

pub use contraction::{flow_contraction_check, hyperbolic_distance, sasaki_distance, UnitTangent};
pub use error::HolonomyError;
pub use frame::{connection_matrix, h_pairing, BaseFrame, Mat3, Vec3, DEGENERACY_TOL, HERMITIAN_DIAGONAL};
pub use sampler::{FourierMode, OrbitData, OrbitSpec, Part, Sampler, PERIODICITY_TOL, QUADRATURE_TOL};
pub use second::{
    eta_cc, eta_cq, reassembled_trace, second_variation_trace_cc, second_variation_trace_cq, trace_mix_cq,
    EtaValue,
};
pub use trace::{
    cubic_direction, eigenvalue_derivative_fd, log_top_eigenvalue, quadratic_direction, trace_derivative,
    ConnectionFamily, GaugeField, FD_STEP, SIMPSON_PANELS,
};
pub use transport::{
    fundamental_solution, parallel_transport, sorted_eigenvalues, Transported, DEFAULT_STEPS, RICHARDSON_TOL, SCHUR_MAX_ITER,
};
pub use variation::{
    shooting_deviation, shooting_solution, variation_ode_closed_form, BoundaryResiduals, Direction,
    ShootingSolution, VariationPath,
};
