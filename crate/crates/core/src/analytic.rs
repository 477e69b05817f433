//! Closed-form moment evolution under two independent zero-temperature
//! amplitude damping channels (interaction picture, so no free rotation).
//!
//! In the Heisenberg picture every ladder-operator monomial of degree one
//! decays as `e^{-kt}` and every degree-two monomial (`a^2`, `a†^2`, `a†a`)
//! as `e^{-2kt}`, each mode with its own rate. Collecting these for `x`, `p`,
//! `x^2`, `p^2` and the symmetrized `xp` gives the 4x4 matrix form used here:
//!
//! ```text
//! mean(t) = E mean(0)
//! cov(t)  = E cov(0) E + (I - E^2) cov_vac,     E = diag(e1, e1, e2, e2)
//! ```
//!
//! with `e_i = exp(-kappa_i t)`. The code evaluates the equivalent
//! `cov_vac + E (cov(0) - cov_vac) E`, which leaves the vacuum exactly
//! invariant in floating point. Cross-mode covariances therefore decay as
//! `exp(-(kappa1 + kappa2) t)`. The symmetrized `xp` entry is not written out
//! anywhere explicitly; it follows from the degree-two decay laws and is
//! checked against the Fock oracle in the integration tests.

use nalgebra::{Matrix4, Vector4};

use crate::error::{Error, Result};
use crate::model::{vacuum_state, ModeIndex, MomentState, Quadrature, TwoModeSystem};

/// Per-mode decay factors `e^{-kappa_i t}` at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DampingMap {
    pub e1: f64,
    pub e2: f64,
    pub t: f64,
}

impl DampingMap {
    pub fn new(system: &TwoModeSystem, t: f64) -> Result<Self> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::NegativeTime(t));
        }
        Ok(Self {
            e1: (-system.mode1.kappa() * t).exp(),
            e2: (-system.mode2.kappa() * t).exp(),
            t,
        })
    }

    /// `E = diag(e1, e1, e2, e2)`.
    pub fn matrix(&self) -> Matrix4<f64> {
        Matrix4::from_diagonal(&Vector4::new(self.e1, self.e1, self.e2, self.e2))
    }
}

/// Evolves `state0` for time `t`. Accepts initially correlated states:
/// only locality of the channels is used.
pub fn evolve_state(state0: &MomentState, system: &TwoModeSystem, t: f64) -> Result<MomentState> {
    let map = DampingMap::new(system, t)?;
    let decay = map.matrix();
    let vac = vacuum_state(system);
    let mean = decay * state0.mean();
    let excess = state0.cov() - vac.cov();
    let mut cov = vac.cov() + decay * excess * decay;
    // Keep exact symmetry; the products above can differ in the last ulp.
    cov = (cov + cov.transpose()) * 0.5;
    Ok(MomentState::new_unchecked(mean, cov))
}

/// The `t -> infinity` limit: the two-mode ground state.
pub fn asymptotic_state(system: &TwoModeSystem) -> Result<MomentState> {
    for mode in [ModeIndex::One, ModeIndex::Two] {
        if system.mode(mode).kappa() == 0.0 {
            return Err(Error::UndampedMode(mode));
        }
    }
    Ok(vacuum_state(system))
}

/// `Delta x * Delta p` of one mode.
pub fn uncertainty_product(state: &MomentState, mode: ModeIndex) -> f64 {
    let i = mode.offset();
    let cov = state.cov();
    (cov[(i, i)] * cov[(i + 1, i + 1)]).sqrt()
}

/// Covariance between a mode-1 quadrature and a mode-2 quadrature. These
/// commute, so the symmetrized entry equals `<A1 A2> - <A1><A2>`.
pub fn cross_covariance(state: &MomentState, mode1_obs: Quadrature, mode2_obs: Quadrature) -> f64 {
    state.covariance((ModeIndex::One, mode1_obs), (ModeIndex::Two, mode2_obs))
}
