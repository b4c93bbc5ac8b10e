use thiserror::Error;

use crate::subgroups::SubgroupKind;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("automorphism matrix is singular (det = {det})")]
    SingularAutomorphism { det: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("standing hypothesis violated: alpha must vanish when gamma != 0 (alpha = {alpha}, gamma = {gamma})")]
    AlphaGammaConstraint { alpha: f64, gamma: f64 },

    #[error("no invariance criterion for the normal subgroup {0:?}")]
    UnsupportedKind(SubgroupKind),

    #[error("linear field does not leave {kind:?} invariant: {violated}")]
    NotInvariant { kind: SubgroupKind, violated: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("input coefficient b must be nonzero (b = {b})")]
    ZeroInputGain { b: f64 },

    #[error("system fails the Lie algebra rank condition")]
    LarcFailure,

    #[error("operation needs a nonzero drift rate lambda")]
    ZeroDriftRate,

    #[error("operation needs a one-input system, got {0} inputs")]
    NotOneInput(usize),

    #[error("control value {value:?} outside the control box")]
    ControlOutOfBox { value: Vec<f64> },

    #[error("state became non-finite at t = {time}")]
    NonFinite { time: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
