//! Holomorphic differentials in the Poincaré-disk chart and the algebraic
//! vanishing of their rotation-averaged triple correlations.
//!
//! * [`DifferentialExpansion`] evaluates a truncated Taylor expansion along
//!   geodesics from the base point.
//! * [`angular_triple_reduce`] averages a triple product over the base
//!   direction, leaving a double series in `tanh t` and `tanh s` whose
//!   coefficients are bilinear in the expansion data.
//! * [`build_relations`] expands flow-time symmetry identities of each
//!   [`CaseTag`] in exact rational arithmetic and matches powers, and
//!   [`solve_vanishing`] decides by exact rank whether the relations force
//!   the coefficient families to vanish.

mod cases;
mod error;
mod expansion;
mod named;
mod relations;
mod series;
mod solve;
mod triple;

pub use cases::{CaseTag, Convention, Coupling};
pub use error::DiskError;
pub use expansion::DifferentialExpansion;
pub use named::{check_named_relations, named_relations, NamedCheck, NamedRelation};
pub use relations::{build_relations, rational_text, RecursionSystem, Relation, RowDump, SystemDump, Unknown};
pub use series::PowerSeries;
pub use solve::{kernel_basis, rref, solve_vanishing, Verdict, VerdictKind, DEFAULT_MARGIN};
pub use triple::{angular_triple_reduce, monte_carlo_triple, McEstimate, TripleSeries};
