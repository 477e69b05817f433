//! Drives the engines over a scenario's time grid.

use ampdamp::analytic::{self, asymptotic_state, uncertainty_product};
use ampdamp::fock::{self, OperatorMatrix};
use ampdamp::search::{search_classical_structure, SearchOutcome};
use ampdamp::structures::{evaluate_structure, transform_state, StructureReport};
use ampdamp::{vacuum_state, Lct, ModeIndex, MomentState, TwoModeSystem};
use nalgebra::Vector4;
use num_complex::Complex64;

use crate::error::CliError;
use crate::scenario::{Engine, Initial, Scenario};

/// Transformed-structure quantities at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StructureSample {
    pub product_a: f64,
    pub product_b: f64,
    pub cov_xx: f64,
    pub cov_pp: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub state: MomentState,
    pub products: [f64; 2],
    pub structure: Option<StructureSample>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub engine: Engine,
    pub samples: Vec<Sample>,
    /// Largest |analytic - fock| over all 14 tracked moments and samples;
    /// only set for `Engine::Both`.
    pub oracle_deviation: Option<f64>,
}

pub fn initial_moments(scenario: &Scenario) -> Result<MomentState, CliError> {
    let system = &scenario.system;
    let hbar = system.hbar();
    Ok(match &scenario.initial {
        Initial::Vacuum => vacuum_state(system),
        Initial::Coherent { alpha1, alpha2 } => {
            let quad = |m: &ampdamp::ModeParams, a: &Complex64| {
                (
                    (2.0 * hbar / (m.mass() * m.omega())).sqrt() * a.re,
                    (2.0 * m.mass() * hbar * m.omega()).sqrt() * a.im,
                )
            };
            let (x1, p1) = quad(&system.mode1, alpha1);
            let (x2, p2) = quad(&system.mode2, alpha2);
            MomentState::new(Vector4::new(x1, p1, x2, p2), *vacuum_state(system).cov(), hbar)?
        }
        Initial::Moments(state) => *state,
        Initial::Density(rho) => {
            let state = fock_moments(rho, system, 0.0)?;
            MomentState::new(*state.mean(), *state.cov(), hbar)?
        }
    })
}

/// The two-mode density matrix of the initial state, if it has one.
pub fn initial_density(scenario: &Scenario) -> Result<OperatorMatrix, CliError> {
    let dim = scenario.fock_dim;
    let (a1, a2) = match &scenario.initial {
        Initial::Vacuum => (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)),
        Initial::Coherent { alpha1, alpha2 } => (*alpha1, *alpha2),
        Initial::Density(rho) => return Ok(rho.clone()),
        Initial::Moments(_) => {
            return Err(CliError::Validation(
                "initial: moment-only states have no density matrix".into(),
            ))
        }
    };
    Ok(fock::kron(
        &fock::coherent_density(a1, dim)?,
        &fock::coherent_density(a2, dim)?,
    )?)
}

fn fock_moments(rho: &OperatorMatrix, system: &TwoModeSystem, t: f64) -> Result<MomentState, CliError> {
    let dim = rho.dim();
    let ks1 = fock::kraus_operators(system.mode1.kappa(), t, dim)?;
    let ks2 = fock::kraus_operators(system.mode2.kappa(), t, dim)?;
    Ok(fock::tracked_moments(rho, system, &ks1, &ks2)?)
}

/// The 14 tracked moments: 4 means then the upper triangle of the covariance.
pub fn tracked(state: &MomentState) -> [f64; 14] {
    let mut out = [0.0; 14];
    out[..4].copy_from_slice(state.mean().as_slice());
    let mut k = 4;
    for i in 0..4 {
        for j in i..4 {
            out[k] = state.cov()[(i, j)];
            k += 1;
        }
    }
    out
}

pub fn max_deviation(a: &MomentState, b: &MomentState) -> f64 {
    tracked(a)
        .iter()
        .zip(tracked(b).iter())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn structure_sample(state: &MomentState, lct: &Lct) -> Result<StructureSample, CliError> {
    let s = transform_state(state, lct)?;
    Ok(StructureSample {
        product_a: uncertainty_product(&s, ModeIndex::One),
        product_b: uncertainty_product(&s, ModeIndex::Two),
        cov_xx: s.cov()[(0, 2)],
        cov_pp: s.cov()[(1, 3)],
    })
}

fn sample(t: f64, state: MomentState, lct: Option<&Lct>) -> Result<Sample, CliError> {
    Ok(Sample {
        t,
        products: [
            uncertainty_product(&state, ModeIndex::One),
            uncertainty_product(&state, ModeIndex::Two),
        ],
        structure: lct.map(|l| structure_sample(&state, l)).transpose()?,
        state,
    })
}

pub fn evolve(scenario: &Scenario) -> Result<Trajectory, CliError> {
    let system = &scenario.system;
    let lct = scenario.lct.as_ref();
    let times = scenario.grid.times();
    let analytic_states = || -> Result<Vec<MomentState>, CliError> {
        let s0 = initial_moments(scenario)?;
        times
            .iter()
            .map(|&t| Ok(analytic::evolve_state(&s0, system, t)?))
            .collect()
    };
    let fock_states = || -> Result<Vec<MomentState>, CliError> {
        let rho = initial_density(scenario)?;
        times.iter().map(|&t| fock_moments(&rho, system, t)).collect()
    };

    let (states, oracle_deviation) = match scenario.engine {
        Engine::Analytic => (analytic_states()?, None),
        Engine::Fock => (fock_states()?, None),
        Engine::Both => {
            let a = analytic_states()?;
            let f = fock_states()?;
            let dev = a.iter().zip(&f).map(|(x, y)| max_deviation(x, y)).fold(0.0, f64::max);
            (a, Some(dev))
        }
    };
    let samples = times
        .iter()
        .zip(states)
        .map(|(&t, s)| sample(t, s, lct))
        .collect::<Result<_, _>>()?;
    Ok(Trajectory {
        engine: scenario.engine,
        samples,
        oracle_deviation,
    })
}

/// Least-squares slope of `ln|y|` against `t`. Needs at least two points
/// with `y != 0`.
pub fn log_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(_, y)| *y != 0.0 && y.is_finite())
        .map(|&(t, y)| (t, y.abs().ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mt = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mt) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mt).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Per-sample oracle diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleSample {
    pub t: f64,
    pub max_deviation: f64,
    pub completeness: [f64; 2],
    pub bh_residual: [f64; 2],
}

pub fn oracle(scenario: &Scenario) -> Result<Vec<OracleSample>, CliError> {
    let system = &scenario.system;
    let dim = scenario.fock_dim;
    let rho = initial_density(scenario)?;
    let s0 = initial_moments(scenario)?;
    scenario
        .grid
        .times()
        .into_iter()
        .map(|t| {
            let (k1, k2) = (system.mode1.kappa(), system.mode2.kappa());
            let ks1 = fock::kraus_operators(k1, t, dim)?;
            let ks2 = fock::kraus_operators(k2, t, dim)?;
            let numeric = fock::tracked_moments(&rho, system, &ks1, &ks2)?;
            let exact = analytic::evolve_state(&s0, system, t)?;
            Ok(OracleSample {
                t,
                max_deviation: max_deviation(&numeric, &exact),
                completeness: [fock::completeness_defect(&ks1), fock::completeness_defect(&ks2)],
                bh_residual: [
                    fock::bh_identity_residual(k1, t, dim)?,
                    fock::bh_identity_residual(k2, t, dim)?,
                ],
            })
        })
        .collect()
}

pub fn structure(scenario: &Scenario) -> Result<(Lct, Option<StructureReport>, Vec<Sample>), CliError> {
    let lct = scenario
        .lct
        .ok_or_else(|| CliError::Validation("lct: the structure command needs an `lct` entry".into()))?;
    let asymptotic = match asymptotic_state(&scenario.system) {
        Ok(_) => Some(evaluate_structure(&lct, &scenario.system)?),
        Err(_) => None,
    };
    let trajectory = evolve(&Scenario {
        lct: Some(lct),
        ..scenario.clone()
    })?;
    Ok((lct, asymptotic, trajectory.samples))
}

pub fn classicality(scenario: &Scenario) -> Result<SearchOutcome, CliError> {
    Ok(search_classical_structure(&scenario.system, &scenario.search)?)
}
