//! Two independent amplitude damping channels acting on a pair of uncoupled
//! oscillator modes.
//!
//! The crate carries two engines that never share code paths:
//!
//! - [`analytic`] evolves Gaussian moment states in closed form;
//! - [`fock`] builds truncated Fock-space matrices and evaluates the Kraus
//!   sums explicitly, serving as a brute-force oracle for the former.
//!
//! [`structures`] applies linear canonical transformations (LCTs) to the
//! asymptotic state to ask which decompositions of the composite system end
//! up as products of minimal-uncertainty states, and [`search`] looks for
//! such decompositions numerically.
//!
//! All values are immutable and every operation is a pure function.

// `!(x >= 0.0)` style checks are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod error;
pub mod fock;
pub mod model;
pub mod search;
pub mod structures;

mod simplex;

pub use error::{Error, Result};
pub use model::{vacuum_state, Lct, ModeIndex, ModeParams, MomentState, PhysicalConstants, Quadrature, TwoModeSystem};
