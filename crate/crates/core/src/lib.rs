//! Linear control systems on the three-dimensional Heisenberg group.
//!
//! - [`heisenberg`]: the group, its Lie algebra, linear fields and their flows.
//! - [`subgroups`]: closed subgroups, invariance criteria and quotient charts.
//! - [`induced`]: the systems induced on the coset spaces, with conjugation checks.
//! - [`analysis`]: the rank condition, closed-form control sets and grid estimates.

pub mod analysis;
pub mod control;
pub mod error;
pub mod expm;
pub mod heisenberg;
pub mod induced;
pub mod subgroups;

pub use control::{integrate, ControlBox, ControlSignal, ControlSystem, Piece, Reversed, Trajectory};
pub use error::{Error, Result};
pub use heisenberg::{AlgebraElement, GroupAutomorphism, GroupElement, LinearField};
pub use induced::{Sigma0pParams, Sigma10Params, Sigma11Params, SigmaH};
pub use subgroups::{QuotientPoint0p, QuotientPoint1p, SubgroupKind};
