use nalgebra::{DMatrix, Matrix4, Vector4};
use num_complex::Complex64;

use super::kraus::KrausSet;
use super::operators::{build_mode_operators, check_density, OperatorMatrix, ONE, ZERO};
use crate::error::{Error, Result};
use crate::model::{MomentState, TwoModeSystem, STRUCTURAL_TOL};

type Sparse = Vec<Vec<(usize, usize, Complex64)>>;

/// Schrödinger-picture evolution `ρ ↦ Σ K ρ K†`.
///
/// A single-mode `rho0` needs only `ks1`. A two-mode `rho0` needs both sets
/// and is evolved with the product family `K¹_m ⊗ K²_n`, applied one factor
/// at a time (the double sum factorizes into two local channels).
pub fn evolve_density(rho0: &OperatorMatrix, ks1: &KrausSet, ks2: Option<&KrausSet>) -> Result<OperatorMatrix> {
    let dim = rho0.dim();
    check_cutoff(ks1, dim)?;
    match (rho0.mode_count(), ks2) {
        (1, _) => {
            check_density(rho0, STRUCTURAL_TOL)?;
            let out = apply_local(rho0.entries(), dim, 1, &ks1.sparse(), true);
            OperatorMatrix::new(dim, 1, out)
        }
        (2, Some(ks2)) => {
            check_cutoff(ks2, dim)?;
            check_density(rho0, STRUCTURAL_TOL)?;
            let half = apply_local(rho0.entries(), dim, dim, &ks2.sparse(), false);
            let out = apply_local(&half, dim, dim, &ks1.sparse(), true);
            OperatorMatrix::new(dim, 2, out)
        }
        _ => Err(Error::DimensionMismatch {
            expected: dim,
            found: rho0.side(),
        }),
    }
}

fn check_cutoff(ks: &KrausSet, dim: usize) -> Result<()> {
    if ks.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: ks.dim(),
        });
    }
    Ok(())
}

/// Applies `Σ (K ⊗ I) ρ (K ⊗ I)†` (or `I ⊗ K` when `first` is false) on a
/// `d1 * d2` space in mode-1-major order. Kraus operators are given by their
/// nonzero entries; amplitude damping operators are single bands, so this
/// is far cheaper than dense products.
fn apply_local(rho: &DMatrix<Complex64>, d1: usize, d2: usize, ks: &Sparse, first: bool) -> DMatrix<Complex64> {
    let side = d1 * d2;
    let mut out = DMatrix::<Complex64>::zeros(side, side);
    for nz in ks {
        for &(r, c, v) in nz {
            for &(rp, cp, vp) in nz {
                let w = v * vp.conj();
                if first {
                    for j in 0..d2 {
                        for l in 0..d2 {
                            out[(r * d2 + j, rp * d2 + l)] += w * rho[(c * d2 + j, cp * d2 + l)];
                        }
                    }
                } else {
                    for i in 0..d1 {
                        for k in 0..d1 {
                            out[(i * d2 + r, k * d2 + rp)] += w * rho[(i * d2 + c, k * d2 + cp)];
                        }
                    }
                }
            }
        }
    }
    out
}

/// Heisenberg-picture observable `Σ K_n† A K_n` for a single mode.
pub fn heisenberg_operator(op: &OperatorMatrix, ks: &KrausSet) -> Result<OperatorMatrix> {
    if op.mode_count() != 1 {
        return Err(Error::DimensionMismatch {
            expected: op.dim(),
            found: op.side(),
        });
    }
    check_cutoff(ks, op.dim())?;
    let dim = op.dim();
    let a = op.entries();
    let mut out = DMatrix::<Complex64>::zeros(dim, dim);
    for nz in ks.sparse() {
        // (K† A K)[c, c'] = Σ conj(K[r, c]) A[r, r'] K[r', c']
        for &(r, c, v) in &nz {
            let vc = v.conj();
            for &(rp, cp, vp) in &nz {
                out[(c, cp)] += vc * a[(r, rp)] * vp;
            }
        }
    }
    OperatorMatrix::new(dim, 1, out)
}

/// `tr[(A1 ⊗ A2) ρ]` on a two-mode density; `None` stands for the identity.
fn two_mode_trace(
    a1: Option<&DMatrix<Complex64>>,
    a2: Option<&DMatrix<Complex64>>,
    rho: &DMatrix<Complex64>,
    dim: usize,
) -> Complex64 {
    let mut acc = ZERO;
    match (a1, a2) {
        (Some(a1), Some(a2)) => {
            for i in 0..dim {
                for k in 0..dim {
                    let x = a1[(i, k)];
                    if x == ZERO {
                        continue;
                    }
                    for j in 0..dim {
                        for l in 0..dim {
                            acc += x * a2[(j, l)] * rho[(k * dim + l, i * dim + j)];
                        }
                    }
                }
            }
        }
        (Some(a1), None) => {
            for i in 0..dim {
                for k in 0..dim {
                    for j in 0..dim {
                        acc += a1[(i, k)] * rho[(k * dim + j, i * dim + j)];
                    }
                }
            }
        }
        (None, Some(a2)) => {
            for i in 0..dim {
                for j in 0..dim {
                    for l in 0..dim {
                        acc += a2[(j, l)] * rho[(i * dim + l, i * dim + j)];
                    }
                }
            }
        }
        (None, None) => acc = rho.trace(),
    }
    acc
}

fn check_two_mode(rho0: &OperatorMatrix, ks1: &KrausSet, ks2: &KrausSet) -> Result<()> {
    if rho0.mode_count() != 2 {
        return Err(Error::DimensionMismatch {
            expected: rho0.dim() * rho0.dim(),
            found: rho0.side(),
        });
    }
    check_cutoff(ks1, rho0.dim())?;
    check_cutoff(ks2, rho0.dim())
}

/// Heisenberg-picture expectation
/// `tr[(Σ_m K¹_m† A1 K¹_m ⊗ Σ_n K²_n† A2 K²_n) ρ0]`, i.e. `⟨A1(t) A2(t)⟩`.
/// `a2 = None` means the mode-2 identity.
pub fn heisenberg_moment(
    a1: &OperatorMatrix,
    a2: Option<&OperatorMatrix>,
    ks1: &KrausSet,
    ks2: &KrausSet,
    rho0: &OperatorMatrix,
) -> Result<Complex64> {
    check_two_mode(rho0, ks1, ks2)?;
    let a1t = heisenberg_operator(a1, ks1)?;
    let a2t = a2.map(|a| heisenberg_operator(a, ks2)).transpose()?;
    Ok(two_mode_trace(
        Some(a1t.entries()),
        a2t.as_ref().map(|a| a.entries()),
        rho0.entries(),
        rho0.dim(),
    ))
}

/// All four means and ten independent covariance entries of `ρ0` evolved
/// by the two Kraus families, read off in the Heisenberg picture.
///
/// Intra-mode second moments use the evolved product operators
/// `(AB + BA)/2`; cross-mode ones use `A1(t) ⊗ A2(t)`. The result is not
/// validated: near the cutoff edge truncation noise can break exactness.
pub fn tracked_moments(
    rho0: &OperatorMatrix,
    system: &TwoModeSystem,
    ks1: &KrausSet,
    ks2: &KrausSet,
) -> Result<MomentState> {
    check_two_mode(rho0, ks1, ks2)?;
    let dim = rho0.dim();
    let rho = rho0.entries();
    let ops1 = build_mode_operators(dim, &system.mode1, &system.constants)?;
    let ops2 = build_mode_operators(dim, &system.mode2, &system.constants)?;
    let quad = [&ops1.x, &ops1.p, &ops2.x, &ops2.p];
    let kraus = [ks1, ks1, ks2, ks2];
    let mode = |i: usize| i / 2;

    let evolved: Vec<OperatorMatrix> = (0..4)
        .map(|i| heisenberg_operator(quad[i], kraus[i]))
        .collect::<Result<_>>()?;
    let local_trace = |i: usize, op: &DMatrix<Complex64>| {
        if mode(i) == 0 {
            two_mode_trace(Some(op), None, rho, dim)
        } else {
            two_mode_trace(None, Some(op), rho, dim)
        }
    };

    let mut mean = Vector4::zeros();
    for i in 0..4 {
        mean[i] = local_trace(i, evolved[i].entries()).re;
    }

    let half = Complex64::new(0.5, 0.0);
    let mut cov = Matrix4::zeros();
    for i in 0..4 {
        for j in i..4 {
            let second = if mode(i) == mode(j) {
                let prod = quad[i].entries() * quad[j].entries();
                let sym = (&prod + prod.adjoint()) * half;
                let sym = OperatorMatrix::new(dim, 1, sym)?;
                let sym_t = heisenberg_operator(&sym, kraus[i])?;
                local_trace(i, sym_t.entries())
            } else {
                two_mode_trace(Some(evolved[i].entries()), Some(evolved[j].entries()), rho, dim)
            };
            let c = second.re - mean[i] * mean[j];
            cov[(i, j)] = c;
            cov[(j, i)] = c;
        }
    }
    Ok(MomentState::new_unchecked(mean, cov))
}

/// `|tr ρ - 1|` and the max-norm distance from Hermiticity, for diagnostics.
pub fn trace_and_hermiticity(rho: &OperatorMatrix) -> (f64, f64) {
    ((rho.trace() - ONE).norm(), rho.hermiticity_defect())
}
