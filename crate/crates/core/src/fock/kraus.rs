use nalgebra::DMatrix;
use num_complex::Complex64;

use super::operators::{lowering, number_exponential, OperatorMatrix};
use crate::error::{Error, Result};

/// The amplitude damping Kraus family
/// `K_n(t) = sqrt((1 - e^{-2κt})^n / n!) e^{-κtN} a^n` on a truncated space.
///
/// `a^n` vanishes for `n >= dim`, so the family `K_0 .. K_{dim-1}` is the
/// complete (not approximated) channel on the truncated space.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausSet {
    kappa: f64,
    t: f64,
    dim: usize,
    ops: Vec<OperatorMatrix>,
}

impl KrausSet {
    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ops(&self) -> &[OperatorMatrix] {
        &self.ops
    }

    /// Nonzero entries `(row, col, value)` of every operator, in order.
    pub(crate) fn sparse(&self) -> Vec<Vec<(usize, usize, Complex64)>> {
        self.ops
            .iter()
            .map(|k| {
                let m = k.entries();
                let mut nz = Vec::new();
                for c in 0..m.ncols() {
                    for r in 0..m.nrows() {
                        let v = m[(r, c)];
                        if v.re != 0.0 || v.im != 0.0 {
                            nz.push((r, c, v));
                        }
                    }
                }
                nz
            })
            .collect()
    }

    #[cfg(test)]
    pub(crate) fn drop_last(mut self) -> Self {
        self.ops.pop();
        self
    }
}

pub fn kraus_operators(kappa: f64, t: f64, dim: usize) -> Result<KrausSet> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::NegativeTime(t));
    }
    if !(kappa >= 0.0) || !kappa.is_finite() {
        return Err(Error::InvalidParameter {
            name: "kappa",
            value: kappa,
            reason: "must be non-negative and finite",
        });
    }
    let a = lowering(dim)?;
    let s = kappa * t;
    // 1 - e^{-2s}, accurate for small s.
    let q = -(-2.0 * s).exp_m1();
    let damp = number_exponential(dim, s);

    let mut ops = Vec::with_capacity(dim);
    let mut a_pow = DMatrix::<Complex64>::identity(dim, dim);
    let mut coeff = 1.0f64;
    for n in 0..dim {
        if n > 0 {
            a_pow = &a_pow * a.entries();
            coeff *= (q / n as f64).sqrt();
        }
        let k = &damp * &a_pow * Complex64::new(coeff, 0.0);
        ops.push(OperatorMatrix::new(dim, 1, k)?);
    }
    Ok(KrausSet { kappa, t, dim, ops })
}

/// Max-norm of `I - Σ K_n† K_n`.
pub fn completeness_defect(ks: &KrausSet) -> f64 {
    let dim = ks.dim;
    let mut sum = DMatrix::<Complex64>::zeros(dim, dim);
    for k in &ks.ops {
        sum += k.entries().adjoint() * k.entries();
    }
    let id = DMatrix::<Complex64>::identity(dim, dim);
    (id - sum).iter().map(|v| v.norm()).fold(0.0, f64::max)
}

/// Max-norm residual of the normal-reordering identities
///
/// ```text
/// e^{-sN} a  e^{-sN} = e^{+s} a  e^{-2sN}
/// e^{-sN} a† e^{-sN} = e^{-s} a† e^{-2sN}
/// ```
///
/// with `s = κt`. Entrywise both sides of the first read `√n e^{-s(2n-1)}`
/// on `(n-1, n)`, and of the second `√(n+1) e^{-s(2n+1)}` on `(n+1, n)`,
/// so they hold exactly on any cutoff. The sign of the exponent is what
/// makes `a` pick up `e^{+κt}` and `a†` pick up `e^{-κt}` when the identity is
/// substituted into the Heisenberg-picture Kraus sum.
pub fn bh_identity_residual(kappa: f64, t: f64, dim: usize) -> Result<f64> {
    let a = lowering(dim)?;
    let s = kappa * t;
    let half = number_exponential(dim, s);
    let full = number_exponential(dim, 2.0 * s);

    let a = a.entries();
    let lhs = &half * a * &half;
    let rhs = a * &full * Complex64::new(s.exp(), 0.0);
    let ad = a.adjoint();
    let lhs_dag = &half * &ad * &half;
    let rhs_dag = &ad * &full * Complex64::new((-s).exp(), 0.0);

    let worst = |x: DMatrix<Complex64>| x.iter().map(|v| v.norm()).fold(0.0, f64::max);
    Ok(worst(lhs - rhs).max(worst(lhs_dag - rhs_dag)))
}
