use crate::model::{ConstraintViolation, ModeIndex};

/// Errors raised by the engines and the structure analyzer.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("moment state is not physical: {0}")]
    NotPhysical(String),
    #[error("singular position block (|det| = {det:e})")]
    SingularMatrix { det: f64 },
    #[error("linear canonical transformation violates {} constraint(s)", .0.len())]
    InvalidLct(Vec<ConstraintViolation>),
    #[error("negative evolution time t = {0}")]
    NegativeTime(f64),
    #[error("mode {0} is undamped (kappa = 0); no unique asymptotic state")]
    UndampedMode(ModeIndex),
    #[error("Fock cutoff must be at least 2, got {0}")]
    CutoffTooSmall(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("not a density matrix: {0}")]
    NotDensity(String),
    #[error("coherent displacement |alpha|^2 = {norm_sqr} exceeds dim/4 = {limit} for cutoff {dim}")]
    TailMass { norm_sqr: f64, limit: f64, dim: usize },
    #[error("every restart converged to the excluded trivial family")]
    NoCandidate,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
