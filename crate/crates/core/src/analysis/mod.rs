//! Rank condition, closed-form control sets and grid estimates for the
//! one-input system on `ℝ × 𝕋`.

pub mod control_sets;
pub mod grid;
pub mod larc;

pub use control_sets::{
    control_set_sigma_11, control_set_sigma_r, p_coefficients, p_polynomial, q_polynomial, ControlSetDescription,
    IntervalSet,
};
pub use grid::{control_set_estimate, reachable_grid, reachable_grid_system, Diagnostic, GridConfig, RegionEstimate};
pub use larc::{larc_numeric_rank, larc_predicate, larc_terms};
