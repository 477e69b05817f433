//! Dense operators on a truncated Fock space.
//!
//! Two-mode operators act on `C^D ⊗ C^D` with mode-1-major ordering: basis
//! state `|i⟩|j⟩` sits at index `i * D + j`. Every two-mode routine in this
//! crate relies on that ordering.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{ModeParams, PhysicalConstants};

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A square complex matrix on a truncated Fock space of one or two modes.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    dim: usize,
    mode_count: usize,
    entries: DMatrix<Complex64>,
}

impl OperatorMatrix {
    /// Wraps `entries` as an operator on `mode_count` modes of cutoff `dim`.
    pub fn new(dim: usize, mode_count: usize, entries: DMatrix<Complex64>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::CutoffTooSmall(dim));
        }
        let side = match mode_count {
            1 => dim,
            2 => dim * dim,
            _ => {
                return Err(Error::InvalidParameter {
                    name: "mode_count",
                    value: mode_count as f64,
                    reason: "must be 1 or 2",
                })
            }
        };
        for found in [entries.nrows(), entries.ncols()] {
            if found != side {
                return Err(Error::DimensionMismatch { expected: side, found });
            }
        }
        Ok(Self {
            dim,
            mode_count,
            entries,
        })
    }

    pub fn single(entries: DMatrix<Complex64>) -> Result<Self> {
        let dim = entries.nrows();
        Self::new(dim, 1, entries)
    }

    pub fn identity(dim: usize, mode_count: usize) -> Result<Self> {
        let side = if mode_count == 2 { dim * dim } else { dim };
        Self::new(dim, mode_count, DMatrix::identity(side, side))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mode_count(&self) -> usize {
        self.mode_count
    }

    /// Side length of the matrix, `dim^mode_count`.
    pub fn side(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<Complex64> {
        self.entries
    }

    pub fn adjoint(&self) -> Self {
        Self {
            dim: self.dim,
            mode_count: self.mode_count,
            entries: self.entries.adjoint(),
        }
    }

    /// Operator product `self * rhs`.
    pub fn compose(&self, rhs: &Self) -> Result<Self> {
        self.same_shape(rhs)?;
        Ok(Self {
            dim: self.dim,
            mode_count: self.mode_count,
            entries: &self.entries * &rhs.entries,
        })
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }

    /// `tr(self * rho)`.
    pub fn expectation(&self, rho: &Self) -> Result<Complex64> {
        self.same_shape(rho)?;
        let n = self.side();
        let mut acc = ZERO;
        for i in 0..n {
            for k in 0..n {
                acc += self.entries[(i, k)] * rho.entries[(k, i)];
            }
        }
        Ok(acc)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.same_shape(other)?;
        Ok(self
            .entries
            .iter()
            .zip(other.entries.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Largest entrywise modulus of `self - self^†`.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.side();
        let mut worst = 0.0f64;
        for r in 0..n {
            for c in r..n {
                worst = worst.max((self.entries[(r, c)] - self.entries[(c, r)].conj()).norm());
            }
        }
        worst
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        let herm = (&self.entries + self.entries.adjoint()) * Complex64::new(0.5, 0.0);
        SymmetricEigen::new(herm)
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    pub(crate) fn same_shape(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim || self.mode_count != other.mode_count {
            return Err(Error::DimensionMismatch {
                expected: self.side(),
                found: other.side(),
            });
        }
        Ok(())
    }
}

/// Kronecker product of two single-mode operators with equal cutoffs.
pub fn kron(mode1: &OperatorMatrix, mode2: &OperatorMatrix) -> Result<OperatorMatrix> {
    for op in [mode1, mode2] {
        if op.mode_count != 1 {
            return Err(Error::DimensionMismatch {
                expected: op.dim,
                found: op.side(),
            });
        }
    }
    mode1.same_shape(mode2)?;
    OperatorMatrix::new(mode1.dim, 2, mode1.entries.kronecker(&mode2.entries))
}

/// Ladder, number and quadrature operators of one mode.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeOperators {
    pub a: OperatorMatrix,
    pub a_dagger: OperatorMatrix,
    pub number: OperatorMatrix,
    pub x: OperatorMatrix,
    pub p: OperatorMatrix,
}

/// Builds `a`, `a†`, `N = a†a`, `x = sqrt(hbar/2mω)(a + a†)` and
/// `p = i sqrt(mħω/2)(a† - a)` on the cutoff `dim`.
pub fn build_mode_operators(dim: usize, params: &ModeParams, constants: &PhysicalConstants) -> Result<ModeOperators> {
    let a = lowering(dim)?;
    let a_dagger = a.adjoint();
    let number = OperatorMatrix::new(
        dim,
        1,
        DMatrix::from_fn(
            dim,
            dim,
            |r, c| {
                if r == c {
                    Complex64::new(r as f64, 0.0)
                } else {
                    ZERO
                }
            },
        ),
    )?;
    let hbar = constants.hbar();
    let x_scale = Complex64::new((hbar / (2.0 * params.mass() * params.omega())).sqrt(), 0.0);
    let p_scale = Complex64::new(0.0, (params.mass() * hbar * params.omega() / 2.0).sqrt());
    let x = OperatorMatrix::new(dim, 1, (&a.entries + &a_dagger.entries) * x_scale)?;
    let p = OperatorMatrix::new(dim, 1, (&a_dagger.entries - &a.entries) * p_scale)?;
    Ok(ModeOperators {
        a,
        a_dagger,
        number,
        x,
        p,
    })
}

/// The lowering operator with `a[n-1][n] = sqrt(n)`.
pub fn lowering(dim: usize) -> Result<OperatorMatrix> {
    if dim < 2 {
        return Err(Error::CutoffTooSmall(dim));
    }
    let mut a = DMatrix::zeros(dim, dim);
    for n in 1..dim {
        a[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    OperatorMatrix::new(dim, 1, a)
}

/// Diagonal matrix `exp(-s N)`, computed entrywise.
pub fn number_exponential(dim: usize, s: f64) -> DMatrix<Complex64> {
    DMatrix::from_fn(dim, dim, |r, c| {
        if r == c {
            Complex64::new((-s * r as f64).exp(), 0.0)
        } else {
            ZERO
        }
    })
}

/// Checks Hermiticity, unit trace and positivity, all to within `tol`.
pub fn check_density(rho: &OperatorMatrix, tol: f64) -> Result<()> {
    let herm = rho.hermiticity_defect();
    if herm > tol {
        return Err(Error::NotDensity(format!("not Hermitian (defect {herm:e})")));
    }
    let tr = rho.trace();
    if (tr - ONE).norm() > tol {
        return Err(Error::NotDensity(format!("trace {tr} differs from 1")));
    }
    // rho + tol*I admits a Cholesky factor iff min eigenvalue > -tol.
    let n = rho.side();
    let shifted = (&rho.entries + rho.entries.adjoint()) * Complex64::new(0.5, 0.0)
        + DMatrix::<Complex64>::identity(n, n) * Complex64::new(tol, 0.0);
    if !cholesky_succeeds(shifted) {
        return Err(Error::NotDensity(format!(
            "not positive semidefinite (eigenvalue below -{tol:e})"
        )));
    }
    Ok(())
}

/// In-place Cholesky factorization of a Hermitian matrix, reporting whether
/// every pivot stayed strictly positive.
fn cholesky_succeeds(mut m: DMatrix<Complex64>) -> bool {
    let n = m.nrows();
    for j in 0..n {
        let mut pivot = m[(j, j)].re;
        for k in 0..j {
            pivot -= m[(j, k)].norm_sqr();
        }
        if !(pivot > 0.0) {
            return false;
        }
        let root = pivot.sqrt();
        m[(j, j)] = Complex64::new(root, 0.0);
        for i in j + 1..n {
            let mut v = m[(i, j)];
            for k in 0..j {
                v -= m[(i, k)] * m[(j, k)].conj();
            }
            m[(i, j)] = v / root;
        }
    }
    true
}

/// Coherent state `|α⟩⟨α|` on a cutoff `dim`, renormalized after
/// truncation. Requires `|α|^2 <= dim / 4` so the discarded tail stays
/// negligible.
pub fn coherent_density(alpha: Complex64, dim: usize) -> Result<OperatorMatrix> {
    if dim < 2 {
        return Err(Error::CutoffTooSmall(dim));
    }
    let norm_sqr = alpha.norm_sqr();
    let limit = dim as f64 / 4.0;
    if norm_sqr > limit {
        return Err(Error::TailMass { norm_sqr, limit, dim });
    }
    let mut amps = Vec::with_capacity(dim);
    let mut c = Complex64::new((-norm_sqr / 2.0).exp(), 0.0);
    for n in 0..dim {
        if n > 0 {
            c = c * alpha / (n as f64).sqrt();
        }
        amps.push(c);
    }
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    pure_density(amps.into_iter().map(|a| a / norm).collect())
}

/// Number state `|n⟩⟨n|`.
pub fn fock_density(n: usize, dim: usize) -> Result<OperatorMatrix> {
    if dim < 2 {
        return Err(Error::CutoffTooSmall(dim));
    }
    if n >= dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: n + 1,
        });
    }
    let mut amps = vec![ZERO; dim];
    amps[n] = ONE;
    pure_density(amps)
}

fn pure_density(amps: Vec<Complex64>) -> Result<OperatorMatrix> {
    let dim = amps.len();
    let entries = DMatrix::from_fn(dim, dim, |r, c| amps[r] * amps[c].conj());
    OperatorMatrix::new(dim, 1, entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_ops(dim: usize) -> ModeOperators {
        build_mode_operators(
            dim,
            &ModeParams::new(1.0, 1.0, 0.0).unwrap(),
            &PhysicalConstants::default(),
        )
        .unwrap()
    }

    #[test]
    fn two_level_lowering() {
        let a = lowering(2).unwrap();
        let expected = DMatrix::from_row_slice(2, 2, &[ZERO, ONE, ZERO, ZERO]);
        assert_eq!(*a.entries(), expected);
        assert_eq!(lowering(1), Err(Error::CutoffTooSmall(1)));
    }

    #[test]
    fn position_matrix_elements() {
        let ops = unit_ops(3);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((ops.x.entries()[(0, 1)].re - h).abs() < 1e-15);
        assert!((ops.x.entries()[(1, 0)].re - h).abs() < 1e-15);
        assert_eq!(ops.number.entries()[(2, 2)], Complex64::new(2.0, 0.0));
    }

    #[test]
    fn canonical_commutator_below_edge() {
        let dim = 12;
        let ops = unit_ops(dim);
        let xp = ops.x.compose(&ops.p).unwrap();
        let px = ops.p.compose(&ops.x).unwrap();
        let comm = xp.entries() - px.entries();
        for r in 0..dim - 1 {
            for c in 0..dim - 1 {
                let want = if r == c { Complex64::new(0.0, 1.0) } else { ZERO };
                assert!((comm[(r, c)] - want).norm() < 1e-14, "({r},{c})");
            }
        }
        // The truncation shows up in the last row/column.
        assert!((comm[(dim - 1, dim - 1)] - Complex64::new(0.0, 1.0)).norm() > 1.0);
    }

    #[test]
    fn coherent_examples() {
        let vac = coherent_density(ZERO, 8).unwrap();
        assert_eq!(vac, fock_density(0, 8).unwrap());

        let rho = coherent_density(ONE, 20).unwrap();
        assert!((rho.entries()[(0, 0)].re - (-1.0f64).exp()).abs() < 1e-9);
        assert!((rho.trace() - ONE).norm() < 1e-12);
        let x = unit_ops(20).x;
        let mean = x.expectation(&rho).unwrap();
        assert!((mean.re - 2f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn coherent_tail_guard() {
        assert!(matches!(
            coherent_density(Complex64::new(2.0, 0.0), 8),
            Err(Error::TailMass { .. })
        ));
    }

    #[test]
    fn density_checks() {
        let rho = coherent_density(Complex64::new(0.5, 0.5), 10).unwrap();
        check_density(&rho, 1e-10).unwrap();

        let mut bad = rho.entries().clone();
        bad[(0, 0)] += Complex64::new(0.5, 0.0);
        let bad = OperatorMatrix::single(bad).unwrap();
        assert!(matches!(check_density(&bad, 1e-10), Err(Error::NotDensity(_))));

        // Unit trace but indefinite.
        let mut indef = DMatrix::zeros(2, 2);
        indef[(0, 0)] = Complex64::new(1.5, 0.0);
        indef[(1, 1)] = Complex64::new(-0.5, 0.0);
        let indef = OperatorMatrix::single(indef).unwrap();
        assert!(check_density(&indef, 1e-10).is_err());
    }

    #[test]
    fn kron_uses_mode_one_major_ordering() {
        let a = lowering(3).unwrap();
        let id = OperatorMatrix::identity(3, 1).unwrap();
        let a1 = kron(&a, &id).unwrap();
        // a1 |1⟩|2⟩ = |0⟩|2⟩  =>  entry (0*3+2, 1*3+2)
        assert_eq!(a1.entries()[(2, 5)], ONE);
        assert!(kron(&a1, &id).is_err());
    }
}
