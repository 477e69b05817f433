//! Alternate subsystem structures `A + B` obtained from the native `1 + 2`
//! split by a linear canonical transformation.
//!
//! The channels act locally on modes 1 and 2, so after the transformation
//! the Kraus family is non-local for `A + B`. Moments still transform
//! linearly, which is all that is needed here: the asymptotic state of
//! `1 + 2` is the product vacuum, and its image under the LCT tells whether
//! `A + B` ends up as a product of minimal-uncertainty states as well.

use crate::analytic::asymptotic_state;
use crate::error::{Error, Result};
use crate::model::{Lct, MomentState, TwoModeSystem, STRUCTURAL_TOL};

/// Asymptotic diagnostics of one `A + B` structure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StructureReport {
    pub lct: Lct,
    /// `ΔX_A ΔP_A`.
    pub product_a: f64,
    /// `Δξ_B Δπ_B`.
    pub product_b: f64,
    /// `cov(X_A, ξ_B)`.
    pub cov_xx: f64,
    /// `cov(P_A, π_B)`.
    pub cov_pp: f64,
    pub residual: f64,
}

/// Maps a state to the `(X_A, P_A, ξ_B, π_B)` coordinates:
/// `mean' = S mean`, `cov' = S cov S^T`.
pub fn transform_state(state: &MomentState, lct: &Lct) -> Result<MomentState> {
    let violations = lct.validate(STRUCTURAL_TOL);
    if !violations.is_empty() {
        return Err(Error::InvalidLct(violations));
    }
    let s = lct.phase_space_matrix();
    let mean = s * state.mean();
    let cov = s * state.cov() * s.transpose();
    Ok(MomentState::new_unchecked(mean, (cov + cov.transpose()) * 0.5))
}

struct AsymptoticVariances {
    x: [f64; 2],
    p: [f64; 2],
}

fn asymptotic_variances(system: &TwoModeSystem) -> Result<AsymptoticVariances> {
    // Surfaces the undamped-mode error.
    asymptotic_state(system)?;
    let hbar = system.hbar();
    Ok(AsymptoticVariances {
        x: [
            system.mode1.position_variance(hbar),
            system.mode2.position_variance(hbar),
        ],
        p: [
            system.mode1.momentum_variance(hbar),
            system.mode2.momentum_variance(hbar),
        ],
    })
}

fn weighted(u: [f64; 2], v: [f64; 2], w: [f64; 2]) -> f64 {
    u[0] * v[0] * w[0] + u[1] * v[1] * w[1]
}

/// `(ΔX_A ΔP_A, Δξ_B Δπ_B)` at `t -> infinity`, in closed form:
///
/// ```text
/// ΔX_A ΔP_A = sqrt( (Σ α_i² ħ/2m_iω_i) (Σ γ_i² m_iħω_i/2) )
/// ```
///
/// and likewise for `B` with `β`, `δ`. Both are at least `ħ/2`.
pub fn asymptotic_products(lct: &Lct, system: &TwoModeSystem) -> Result<(f64, f64)> {
    let var = asymptotic_variances(system)?;
    let (a, b, g, d) = (lct.alpha(), lct.beta(), lct.gamma(), lct.delta());
    let product_a = (weighted(a, a, var.x) * weighted(g, g, var.p)).sqrt();
    let product_b = (weighted(b, b, var.x) * weighted(d, d, var.p)).sqrt();
    Ok((product_a, product_b))
}

/// `(cov(X_A, ξ_B), cov(P_A, π_B))` at `t -> infinity`:
/// `Σ α_i β_i ħ/2m_iω_i` and `Σ γ_i δ_i m_iħω_i/2`.
///
/// The momentum-sector term is reported alongside the position one because
/// a Gaussian asymptote is uncorrelated only if both vanish (the mixed
/// `x`-`p` entries are identically zero at the vacuum).
pub fn asymptotic_cross_covariances(lct: &Lct, system: &TwoModeSystem) -> Result<(f64, f64)> {
    let var = asymptotic_variances(system)?;
    Ok((
        weighted(lct.alpha(), lct.beta(), var.x),
        weighted(lct.gamma(), lct.delta(), var.p),
    ))
}

/// Scalar distance from classicality of the asymptotic `A + B` state:
///
/// ```text
/// J = [ (ΔX_A ΔP_A - ħ/2)² + (Δξ_B Δπ_B - ħ/2)² + C_xx² + C_pp² ] / (ħ/2)²
/// ```
///
/// `J = 0` exactly when both subsystems sit at minimal uncertainty and are
/// uncorrelated.
pub fn classicality_residual(lct: &Lct, system: &TwoModeSystem) -> Result<f64> {
    Ok(evaluate_structure(lct, system)?.residual)
}

pub fn evaluate_structure(lct: &Lct, system: &TwoModeSystem) -> Result<StructureReport> {
    let (product_a, product_b) = asymptotic_products(lct, system)?;
    let (cov_xx, cov_pp) = asymptotic_cross_covariances(lct, system)?;
    let half = system.hbar() / 2.0;
    let residual =
        ((product_a - half).powi(2) + (product_b - half).powi(2) + cov_xx.powi(2) + cov_pp.powi(2)) / (half * half);
    Ok(StructureReport {
        lct: *lct,
        product_a,
        product_b,
        cov_xx,
        cov_pp,
        residual,
    })
}

/// `A` = midpoint of the two positions with total momentum, `B` = relative
/// coordinate `x1 - x2` with momentum `(p1 - p2)/2`.
pub fn center_of_mass_lct() -> Lct {
    Lct::new(
        nalgebra::Matrix2::new(0.5, 0.5, 1.0, -1.0),
        nalgebra::Matrix2::new(1.0, 1.0, 0.5, -0.5),
    )
    .expect("center-of-mass blocks are canonical")
}
