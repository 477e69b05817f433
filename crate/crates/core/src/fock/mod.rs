//! Brute-force oracle on a truncated Fock space.
//!
//! Everything here is explicit matrices and explicit Kraus sums; nothing is
//! shared with [`crate::analytic`], which makes the two engines useful as
//! cross-checks of each other. Moment identities hold to machine precision
//! only for states with negligible weight on the top few Fock levels, where
//! the truncated commutator `[a, a†]` departs from the identity.

mod evolve;
mod kraus;
mod operators;

pub use evolve::{evolve_density, heisenberg_moment, heisenberg_operator, trace_and_hermiticity, tracked_moments};
pub use kraus::{bh_identity_residual, completeness_defect, kraus_operators, KrausSet};
pub use operators::{
    build_mode_operators, check_density, coherent_density, fock_density, kron, lowering, number_exponential,
    ModeOperators, OperatorMatrix,
};
