//! Numerical search for classical-like alternate structures.
//!
//! Minimizes [`classicality_residual`](crate::structures::classicality_residual)
//! over the four entries of the position block `M` with a seeded
//! multi-start Nelder-Mead. The native split `1 + 2` (and anything obtained
//! from it by relabeling or rescaling the modes) always has zero residual,
//! so restarts that land within `exclusion_margin` of a scaled permutation
//! matrix are discarded.

use nalgebra::Matrix2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analytic::asymptotic_state;
use crate::error::{Error, Result};
use crate::model::{Lct, TwoModeSystem};
use crate::simplex::NelderMead;
use crate::structures::{evaluate_structure, StructureReport};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    pub restarts: usize,
    pub max_iterations: usize,
    pub tolerance: f64,
    /// Normalized Frobenius distance below which `M` counts as a scaled
    /// permutation.
    pub exclusion_margin: f64,
    pub seed: u64,
    /// Starting entries of `M` are drawn uniformly from `[-r, r]`.
    pub start_range: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            restarts: 32,
            max_iterations: 2000,
            tolerance: 1e-12,
            exclusion_margin: 1e-3,
            seed: 0,
            start_range: 2.0,
        }
    }
}

/// What one restart did.
#[derive(Debug, Clone, PartialEq)]
pub struct RestartTrace {
    pub restart: usize,
    pub start: Matrix2<f64>,
    pub end: Matrix2<f64>,
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
    pub trivial_distance: f64,
    pub excluded: bool,
    /// Best residual after each simplex iteration.
    pub history: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    pub best: StructureReport,
    pub best_restart: usize,
    pub trace: Vec<RestartTrace>,
}

impl SearchOutcome {
    /// Largest and smallest residual over the restarts that were kept.
    pub fn kept_residual_range(&self) -> Option<(f64, f64)> {
        let kept = self.trace.iter().filter(|t| !t.excluded).map(|t| t.residual);
        kept.fold(None, |acc, r| match acc {
            None => Some((r, r)),
            Some((lo, hi)) => Some((lo.min(r), hi.max(r))),
        })
    }
}

/// Distance from `M` to the nearest scaled permutation matrix (diagonal or
/// anti-diagonal pattern), relative to `||M||_F`.
pub fn trivial_distance(m: &Matrix2<f64>) -> f64 {
    let norm = m.norm();
    if norm == 0.0 {
        return 0.0;
    }
    let off = m[(0, 1)].hypot(m[(1, 0)]);
    let diag = m[(0, 0)].hypot(m[(1, 1)]);
    off.min(diag) / norm
}

fn block(x: &[f64]) -> Matrix2<f64> {
    Matrix2::new(x[0], x[1], x[2], x[3])
}

fn objective(system: &TwoModeSystem, x: &[f64]) -> f64 {
    match Lct::from_position_block(block(x)).and_then(|lct| evaluate_structure(&lct, system)) {
        Ok(report) if report.residual.is_finite() => report.residual,
        _ => f64::INFINITY,
    }
}

fn draw_start(rng: &mut ChaCha8Rng, range: f64) -> Matrix2<f64> {
    loop {
        let m = Matrix2::from_fn(|_, _| rng.random_range(-range..range));
        let det = m.determinant();
        if det.abs() > 0.1 * m.norm_squared() / 2.0 && trivial_distance(&m) > 0.1 {
            return m;
        }
    }
}

/// Runs every restart and returns the best non-trivial structure.
///
/// Candidates are ranked by residual (ties within `tolerance`), then by
/// `||M - I||_F`, then by restart order. Deterministic for a given config.
pub fn search_classical_structure(system: &TwoModeSystem, config: &SearchConfig) -> Result<SearchOutcome> {
    asymptotic_state(system)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let starts: Vec<Matrix2<f64>> = (0..config.restarts)
        .map(|_| draw_start(&mut rng, config.start_range))
        .collect();

    let nm = NelderMead {
        max_iterations: config.max_iterations,
        tolerance: config.tolerance,
        initial_step: 0.25,
    };
    let mut trace = Vec::with_capacity(starts.len());
    let mut best: Option<(usize, StructureReport, f64)> = None;
    for (restart, start) in starts.into_iter().enumerate() {
        let min = nm.minimize(|x| objective(system, x), start.as_slice());
        let end = block(&min.x);
        let distance = trivial_distance(&end);
        let report = Lct::from_position_block(end).and_then(|lct| evaluate_structure(&lct, system));
        let excluded = distance < config.exclusion_margin || report.is_err();
        if let (false, Ok(report)) = (excluded, report) {
            let id_gap = (end - Matrix2::identity()).norm();
            let better = match &best {
                None => true,
                Some((_, b, b_gap)) => {
                    report.residual < b.residual - config.tolerance
                        || ((report.residual - b.residual).abs() <= config.tolerance && id_gap < *b_gap)
                }
            };
            if better {
                best = Some((restart, report, id_gap));
            }
        }
        trace.push(RestartTrace {
            restart,
            start,
            end,
            residual: min.value,
            iterations: min.iterations,
            converged: min.converged,
            trivial_distance: distance,
            excluded,
            history: min.history,
        });
    }
    let (best_restart, best, _) = best.ok_or(Error::NoCandidate)?;
    Ok(SearchOutcome {
        best,
        best_restart,
        trace,
    })
}
