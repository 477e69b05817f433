//! CSV and plain-text rendering, plus atomic file output.
//!
//! Every number is written with `{:.16e}` (17 significant digits), so the
//! same scenario always yields byte-identical files.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use ampdamp::analytic::asymptotic_state;
use ampdamp::search::SearchOutcome;
use ampdamp::structures::StructureReport;
use ampdamp::{Lct, MomentState, TwoModeSystem};

use crate::error::CliError;
use crate::run::{log_slope, OracleSample, Sample, Trajectory};

pub const MOMENT_COLUMNS: [&str; 17] = [
    "t", "mean_x1", "mean_p1", "mean_x2", "mean_p2", "cov_x1x1", "cov_x1p1", "cov_x1x2", "cov_x1p2", "cov_p1p1",
    "cov_p1x2", "cov_p1p2", "cov_x2x2", "cov_x2p2", "cov_p2p2", "dxdp_1", "dxdp_2",
];

pub const STRUCTURE_COLUMNS: [&str; 4] = ["dXdP_A", "dXidPi_B", "cov_XA_xiB", "cov_PA_piB"];

pub const ORACLE_COLUMNS: [&str; 6] = [
    "t",
    "max_deviation",
    "completeness_1",
    "completeness_2",
    "bh_residual_1",
    "bh_residual_2",
];

pub const RESTART_COLUMNS: [&str; 14] = [
    "restart",
    "start_alpha1",
    "start_alpha2",
    "start_beta1",
    "start_beta2",
    "residual",
    "iterations",
    "converged",
    "trivial_distance",
    "excluded",
    "end_alpha1",
    "end_alpha2",
    "end_beta1",
    "end_beta2",
];

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn row(cells: impl IntoIterator<Item = String>) -> String {
    let mut line = cells.into_iter().collect::<Vec<_>>().join(",");
    line.push('\n');
    line
}

pub fn trajectory_csv(samples: &[Sample]) -> String {
    let with_structure = samples.first().is_some_and(|s| s.structure.is_some());
    let mut header: Vec<&str> = MOMENT_COLUMNS.to_vec();
    if with_structure {
        header.extend(STRUCTURE_COLUMNS);
    }
    let mut out = row(header.into_iter().map(String::from));
    for s in samples {
        let mut cells = vec![num(s.t)];
        cells.extend(crate::run::tracked(&s.state).iter().map(|&v| num(v)));
        cells.extend(s.products.iter().map(|&v| num(v)));
        if let Some(st) = &s.structure {
            cells.extend([st.product_a, st.product_b, st.cov_xx, st.cov_pp].map(num));
        }
        out.push_str(&row(cells));
    }
    out
}

pub fn oracle_csv(samples: &[OracleSample]) -> String {
    let mut out = row(ORACLE_COLUMNS.map(String::from));
    for s in samples {
        out.push_str(&row([
            s.t,
            s.max_deviation,
            s.completeness[0],
            s.completeness[1],
            s.bh_residual[0],
            s.bh_residual[1],
        ]
        .map(num)));
    }
    out
}

pub fn restarts_csv(outcome: &SearchOutcome) -> String {
    let mut out = row(RESTART_COLUMNS.map(String::from));
    for t in &outcome.trace {
        let mut cells = vec![t.restart.to_string()];
        cells.extend([t.start[(0, 0)], t.start[(0, 1)], t.start[(1, 0)], t.start[(1, 1)]].map(num));
        cells.push(num(t.residual));
        cells.push(t.iterations.to_string());
        cells.push(t.converged.to_string());
        cells.push(num(t.trivial_distance));
        cells.push(t.excluded.to_string());
        cells.extend([t.end[(0, 0)], t.end[(0, 1)], t.end[(1, 0)], t.end[(1, 1)]].map(num));
        out.push_str(&row(cells));
    }
    out
}

fn system_block(out: &mut String, system: &TwoModeSystem) {
    let _ = writeln!(out, "hbar = {}", num(system.hbar()));
    for (name, m) in [("mode1", &system.mode1), ("mode2", &system.mode2)] {
        let _ = writeln!(
            out,
            "{name}: mass = {}, omega = {}, kappa = {}",
            num(m.mass()),
            num(m.omega()),
            num(m.kappa())
        );
    }
}

fn state_block(out: &mut String, label: &str, state: &MomentState) {
    let names = ["x1", "p1", "x2", "p2"];
    let _ = writeln!(
        out,
        "{label} mean: {}",
        state.mean().iter().map(|&v| num(v)).collect::<Vec<_>>().join(" ")
    );
    for (i, n) in names.iter().enumerate() {
        let _ = writeln!(
            out,
            "{label} cov[{n}]: {}",
            (0..4).map(|j| num(state.cov()[(i, j)])).collect::<Vec<_>>().join(" ")
        );
    }
}

fn lct_block(out: &mut String, lct: &Lct) {
    let _ = writeln!(out, "alpha = ({}, {})", num(lct.alpha()[0]), num(lct.alpha()[1]));
    let _ = writeln!(out, "beta  = ({}, {})", num(lct.beta()[0]), num(lct.beta()[1]));
    let _ = writeln!(out, "gamma = ({}, {})", num(lct.gamma()[0]), num(lct.gamma()[1]));
    let _ = writeln!(out, "delta = ({}, {})", num(lct.delta()[0]), num(lct.delta()[1]));
}

fn structure_block(out: &mut String, report: &StructureReport) {
    let _ = writeln!(out, "dXdP_A = {}", num(report.product_a));
    let _ = writeln!(out, "dXidPi_B = {}", num(report.product_b));
    let _ = writeln!(out, "cov_XA_xiB = {}", num(report.cov_xx));
    let _ = writeln!(out, "cov_PA_piB = {}", num(report.cov_pp));
    let _ = writeln!(out, "classicality_residual = {}", num(report.residual));
}

pub fn evolve_summary(system: &TwoModeSystem, traj: &Trajectory) -> String {
    let mut out = String::from("# trajectory summary\n");
    system_block(&mut out, system);
    let _ = writeln!(out, "engine = {:?}", traj.engine);
    let _ = writeln!(out, "samples = {}", traj.samples.len());
    match asymptotic_state(system) {
        Ok(asym) => state_block(&mut out, "asymptotic", &asym),
        Err(e) => {
            let _ = writeln!(out, "asymptotic: none ({e})");
        }
    }
    if let Some(last) = traj.samples.last() {
        state_block(&mut out, "final", &last.state);
        let _ = writeln!(out, "final dxdp_1 = {}", num(last.products[0]));
        let _ = writeln!(out, "final dxdp_2 = {}", num(last.products[1]));
    }
    let points: Vec<(f64, f64)> = traj.samples.iter().map(|s| (s.t, s.state.cov()[(0, 2)])).collect();
    match log_slope(&points) {
        Some(slope) => {
            let _ = writeln!(out, "cov_x1x2 log-slope = {}", num(slope));
            let _ = writeln!(
                out,
                "expected -(kappa1 + kappa2) = {}",
                num(-(system.mode1.kappa() + system.mode2.kappa()))
            );
        }
        None => {
            let _ = writeln!(out, "cov_x1x2 log-slope = n/a (no nonzero cross-covariance)");
        }
    }
    if let Some(dev) = traj.oracle_deviation {
        let _ = writeln!(out, "oracle max deviation = {}", num(dev));
    }
    out
}

pub fn oracle_summary(system: &TwoModeSystem, dim: usize, samples: &[OracleSample]) -> String {
    let max = |f: &dyn Fn(&OracleSample) -> f64| samples.iter().map(f).fold(0.0, f64::max);
    let mut out = String::from("# oracle summary\n");
    system_block(&mut out, system);
    let _ = writeln!(out, "fock_dim = {dim}");
    let _ = writeln!(out, "samples = {}", samples.len());
    let _ = writeln!(out, "max moment deviation = {}", num(max(&|s| s.max_deviation)));
    let _ = writeln!(
        out,
        "max completeness defect = {}",
        num(max(&|s| s.completeness[0].max(s.completeness[1])))
    );
    let _ = writeln!(
        out,
        "max reordering residual = {}",
        num(max(&|s| s.bh_residual[0].max(s.bh_residual[1])))
    );
    out
}

pub fn structure_summary(system: &TwoModeSystem, lct: &Lct, asymptotic: Option<&StructureReport>) -> String {
    let mut out = String::from("# structure summary\n");
    system_block(&mut out, system);
    lct_block(&mut out, lct);
    match asymptotic {
        Some(r) => {
            let _ = writeln!(out, "## asymptotic");
            structure_block(&mut out, r);
        }
        None => {
            let _ = writeln!(out, "asymptotic: none (a mode is undamped)");
        }
    }
    out
}

pub fn classicality_summary(system: &TwoModeSystem, outcome: &SearchOutcome, seed: u64) -> String {
    let mut out = String::from("# classicality search\n");
    system_block(&mut out, system);
    let kept = outcome.trace.iter().filter(|t| !t.excluded).count();
    let _ = writeln!(out, "seed = {seed}");
    let _ = writeln!(out, "restarts = {} (kept {kept})", outcome.trace.len());
    if let Some((lo, hi)) = outcome.kept_residual_range() {
        let _ = writeln!(out, "kept residual range = [{}, {}]", num(lo), num(hi));
    }
    let _ = writeln!(out, "best restart = {}", outcome.best_restart);
    lct_block(&mut out, &outcome.best.lct);
    structure_block(&mut out, &outcome.best);
    out
}

/// Writes every file into `dir`, or none of them.
///
/// Each file goes to a temporary sibling first; the renames happen only
/// after all temporaries were written successfully.
pub fn write_all(dir: &Path, files: &[(&str, String)]) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut staged = Vec::with_capacity(files.len());
    for (name, body) in files {
        let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(dir, e))?;
        tmp.write_all(body.as_bytes())
            .and_then(|_| tmp.as_file().sync_all())
            .map_err(|e| CliError::io(tmp.path(), e))?;
        staged.push((tmp, dir.join(name)));
    }
    for (tmp, target) in staged {
        tmp.persist(&target).map_err(|e| CliError::io(&target, e.error))?;
    }
    Ok(())
}
