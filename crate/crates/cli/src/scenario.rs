//! Scenario files: JSON in, validated engine inputs out.
//!
//! ```json
//! {
//!   "system": {
//!     "hbar": 1.0,
//!     "mode1": { "mass": 1.0, "omega": 1.0, "kappa": 0.5 },
//!     "mode2": { "mass": 2.0, "omega": 1.0, "kappa": 0.3 }
//!   },
//!   "initial": { "kind": "coherent", "alpha1": [1.0, 0.0], "alpha2": [0.0, 1.0] },
//!   "time_grid": { "t_start": 0.0, "t_end": 5.0, "n_steps": 50 },
//!   "engine": "both",
//!   "fock_dim": 32,
//!   "lct": { "position": [[0.5, 0.5], [1.0, -1.0]] },
//!   "seed": 7
//! }
//! ```
//!
//! `initial.kind` is one of `vacuum`, `coherent` (complex displacements as
//! `[re, im]`), `moments` (`mean` 4-vector, `cov` 4x4) or `density`
//! (`real`/`imag` row-major matrices on the two-mode cutoff space, side
//! `fock_dim^2`, mode-1-major).

use ampdamp::fock::{self, OperatorMatrix};
use ampdamp::search::SearchConfig;
use ampdamp::{Lct, ModeParams, MomentState, PhysicalConstants, TwoModeSystem};
use nalgebra::{DMatrix, Matrix2, Matrix4, Vector4};
use num_complex::Complex64;
use serde::Deserialize;

use crate::error::CliError;

pub const DEFAULT_FOCK_DIM: usize = 32;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub system: SystemSpec,
    pub initial: InitialSpec,
    pub time_grid: TimeGridSpec,
    #[serde(default)]
    pub engine: Engine,
    #[serde(default = "default_fock_dim")]
    pub fock_dim: usize,
    #[serde(default)]
    pub lct: Option<LctSpec>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub search: Option<SearchSpec>,
}

fn default_fock_dim() -> usize {
    DEFAULT_FOCK_DIM
}

fn default_hbar() -> f64 {
    1.0
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpec {
    #[serde(default = "default_hbar")]
    pub hbar: f64,
    pub mode1: ModeSpec,
    pub mode2: ModeSpec,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeSpec {
    pub mass: f64,
    pub omega: f64,
    pub kappa: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialSpec {
    Vacuum,
    Coherent {
        alpha1: [f64; 2],
        alpha2: [f64; 2],
    },
    Moments {
        mean: [f64; 4],
        cov: [[f64; 4]; 4],
    },
    Density {
        real: Vec<Vec<f64>>,
        #[serde(default)]
        imag: Option<Vec<Vec<f64>>>,
    },
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeGridSpec {
    pub t_start: f64,
    pub t_end: f64,
    pub n_steps: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    #[default]
    Analytic,
    Fock,
    Both,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LctSpec {
    pub position: [[f64; 2]; 2],
    #[serde(default)]
    pub momentum: Option<[[f64; 2]; 2]>,
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchSpec {
    pub restarts: Option<usize>,
    pub max_iterations: Option<usize>,
    pub tolerance: Option<f64>,
    pub exclusion_margin: Option<f64>,
}

/// Evenly spaced sample times `t_start, ..., t_end` (`n_steps + 1` points).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub t_start: f64,
    pub t_end: f64,
    pub n_steps: usize,
}

impl TimeGrid {
    pub fn times(&self) -> Vec<f64> {
        let h = (self.t_end - self.t_start) / self.n_steps as f64;
        (0..=self.n_steps)
            .map(|k| {
                if k == self.n_steps {
                    self.t_end
                } else {
                    self.t_start + k as f64 * h
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Initial {
    Vacuum,
    Coherent { alpha1: Complex64, alpha2: Complex64 },
    Moments(MomentState),
    Density(OperatorMatrix),
}

/// A scenario that passed every check.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub system: TwoModeSystem,
    pub initial: Initial,
    pub grid: TimeGrid,
    pub engine: Engine,
    pub fock_dim: usize,
    pub lct: Option<Lct>,
    pub seed: u64,
    pub search: SearchConfig,
}

pub fn parse(text: &str) -> Result<ScenarioFile, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
}

fn invalid(field: &str, err: impl std::fmt::Display) -> CliError {
    CliError::Validation(format!("{field}: {err}"))
}

fn mode(field: &str, spec: &ModeSpec) -> Result<ModeParams, CliError> {
    ModeParams::new(spec.mass, spec.omega, spec.kappa).map_err(|e| invalid(field, e))
}

fn block(m: &[[f64; 2]; 2]) -> Matrix2<f64> {
    Matrix2::new(m[0][0], m[0][1], m[1][0], m[1][1])
}

impl ScenarioFile {
    pub fn validate(&self) -> Result<Scenario, CliError> {
        let constants = PhysicalConstants::new(self.system.hbar).map_err(|e| invalid("system.hbar", e))?;
        let system = TwoModeSystem::new(
            mode("system.mode1", &self.system.mode1)?,
            mode("system.mode2", &self.system.mode2)?,
            constants,
        );

        let g = self.time_grid;
        if !(g.t_start >= 0.0 && g.t_start.is_finite()) {
            return Err(invalid("time_grid.t_start", format!("must be >= 0, got {}", g.t_start)));
        }
        if !(g.t_end > g.t_start && g.t_end.is_finite()) {
            return Err(invalid(
                "time_grid.t_end",
                format!("must exceed t_start = {}, got {}", g.t_start, g.t_end),
            ));
        }
        if g.n_steps < 1 {
            return Err(invalid("time_grid.n_steps", "must be at least 1"));
        }
        if self.fock_dim < 2 {
            return Err(invalid(
                "fock_dim",
                format!("must be at least 2, got {}", self.fock_dim),
            ));
        }

        let initial = match &self.initial {
            InitialSpec::Vacuum => Initial::Vacuum,
            InitialSpec::Coherent { alpha1, alpha2 } => Initial::Coherent {
                alpha1: Complex64::new(alpha1[0], alpha1[1]),
                alpha2: Complex64::new(alpha2[0], alpha2[1]),
            },
            InitialSpec::Moments { mean, cov } => {
                let mean = Vector4::from_column_slice(mean);
                let cov = Matrix4::from_fn(|r, c| cov[r][c]);
                Initial::Moments(MomentState::new(mean, cov, system.hbar()).map_err(|e| invalid("initial.cov", e))?)
            }
            InitialSpec::Density { real, imag } => Initial::Density(density(self.fock_dim, real, imag.as_deref())?),
        };
        if let Initial::Coherent { alpha1, alpha2 } = &initial {
            if matches!(self.engine, Engine::Fock | Engine::Both) {
                for (name, alpha) in [("initial.alpha1", alpha1), ("initial.alpha2", alpha2)] {
                    fock::coherent_density(*alpha, self.fock_dim).map_err(|e| invalid(name, e))?;
                }
            }
        }
        if matches!(initial, Initial::Moments(_)) && self.engine != Engine::Analytic {
            return Err(invalid(
                "initial",
                "the fock engine needs an initial state expressible as a density matrix",
            ));
        }

        let lct = self
            .lct
            .map(|spec| match spec.momentum {
                Some(n) => Lct::new(block(&spec.position), block(&n)),
                None => Lct::from_position_block(block(&spec.position)),
            })
            .transpose()
            .map_err(|e| invalid("lct", e))?;

        let mut search = SearchConfig {
            seed: self.seed,
            ..SearchConfig::default()
        };
        if let Some(s) = self.search {
            search.restarts = s.restarts.unwrap_or(search.restarts);
            search.max_iterations = s.max_iterations.unwrap_or(search.max_iterations);
            search.tolerance = s.tolerance.unwrap_or(search.tolerance);
            search.exclusion_margin = s.exclusion_margin.unwrap_or(search.exclusion_margin);
        }
        if search.restarts == 0 {
            return Err(invalid("search.restarts", "must be at least 1"));
        }
        if !(search.tolerance >= 0.0) || !(search.exclusion_margin >= 0.0) {
            return Err(invalid("search", "tolerance and exclusion_margin must be non-negative"));
        }

        Ok(Scenario {
            system,
            initial,
            grid: TimeGrid {
                t_start: g.t_start,
                t_end: g.t_end,
                n_steps: g.n_steps,
            },
            engine: self.engine,
            fock_dim: self.fock_dim,
            lct,
            seed: self.seed,
            search,
        })
    }
}

fn density(dim: usize, real: &[Vec<f64>], imag: Option<&[Vec<f64>]>) -> Result<OperatorMatrix, CliError> {
    let side = dim * dim;
    let check = |name: &str, rows: &[Vec<f64>]| {
        if rows.len() != side || rows.iter().any(|r| r.len() != side) {
            return Err(invalid(
                name,
                format!("expected a {side}x{side} matrix (fock_dim^2 per side)"),
            ));
        }
        Ok(())
    };
    check("initial.real", real)?;
    if let Some(im) = imag {
        check("initial.imag", im)?;
    }
    let entries = DMatrix::from_fn(side, side, |r, c| {
        Complex64::new(real[r][c], imag.map_or(0.0, |im| im[r][c]))
    });
    let rho = OperatorMatrix::new(dim, 2, entries).map_err(|e| invalid("initial", e))?;
    fock::check_density(&rho, ampdamp::model::STRUCTURAL_TOL).map_err(|e| invalid("initial", e))?;
    Ok(rho)
}
