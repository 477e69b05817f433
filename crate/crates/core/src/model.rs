//! Physical parameters, Gaussian moment states and linear canonical
//! transformations shared by every engine.
//!
//! Phase-space vectors use the ordering `(x1, p1, x2, p2)` throughout.
//! Covariances are symmetrized central moments `<{A, B}>/2 - <A><B>`, which
//! keeps the covariance matrix real and symmetric.

use std::fmt;

use nalgebra::{Complex, Matrix2, Matrix4, SymmetricEigen, Vector4};

use crate::error::{Error, Result};

/// Tolerance for structural identities (canonicity, positivity floors).
pub const STRUCTURAL_TOL: f64 = 1e-10;
/// Tolerance for the symmetry of covariance matrices.
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Determinants at or below this magnitude are treated as singular.
pub const SINGULAR_DET: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    hbar: f64,
}

impl PhysicalConstants {
    pub fn new(hbar: f64) -> Result<Self> {
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "hbar",
                value: hbar,
                reason: "must be positive and finite",
            });
        }
        Ok(Self { hbar })
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self { hbar: 1.0 }
    }
}

/// Mass, angular frequency and damping rate of one oscillator mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeParams {
    mass: f64,
    omega: f64,
    kappa: f64,
}

impl ModeParams {
    pub fn new(mass: f64, omega: f64, kappa: f64) -> Result<Self> {
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "mass",
                value: mass,
                reason: "must be positive and finite",
            });
        }
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "omega",
                value: omega,
                reason: "must be positive and finite",
            });
        }
        if !(kappa >= 0.0 && kappa.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "kappa",
                value: kappa,
                reason: "must be non-negative and finite",
            });
        }
        Ok(Self { mass, omega, kappa })
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// Ground-state position variance `hbar / (2 m omega)`.
    pub fn position_variance(&self, hbar: f64) -> f64 {
        hbar / (2.0 * self.mass * self.omega)
    }

    /// Ground-state momentum variance `m hbar omega / 2`.
    pub fn momentum_variance(&self, hbar: f64) -> f64 {
        self.mass * hbar * self.omega / 2.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModeIndex {
    One,
    Two,
}

impl ModeIndex {
    /// Offset of this mode's position entry in `(x1, p1, x2, p2)`.
    pub fn offset(self) -> usize {
        match self {
            ModeIndex::One => 0,
            ModeIndex::Two => 2,
        }
    }
}

impl fmt::Display for ModeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModeIndex::One => f.write_str("1"),
            ModeIndex::Two => f.write_str("2"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quadrature {
    X,
    P,
}

impl Quadrature {
    /// Index of quadrature `q` of mode `mode` in `(x1, p1, x2, p2)`.
    pub fn index(self, mode: ModeIndex) -> usize {
        mode.offset()
            + match self {
                Quadrature::X => 0,
                Quadrature::P => 1,
            }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoModeSystem {
    pub mode1: ModeParams,
    pub mode2: ModeParams,
    pub constants: PhysicalConstants,
}

impl TwoModeSystem {
    pub fn new(mode1: ModeParams, mode2: ModeParams, constants: PhysicalConstants) -> Self {
        Self {
            mode1,
            mode2,
            constants,
        }
    }

    pub fn mode(&self, index: ModeIndex) -> &ModeParams {
        match index {
            ModeIndex::One => &self.mode1,
            ModeIndex::Two => &self.mode2,
        }
    }

    pub fn hbar(&self) -> f64 {
        self.constants.hbar()
    }
}

/// The standard symplectic form for the `(x1, p1, x2, p2)` ordering.
pub fn symplectic_form() -> Matrix4<f64> {
    Matrix4::new(
        0.0, 1.0, 0.0, 0.0, //
        -1.0, 0.0, 0.0, 0.0, //
        0.0, 0.0, 0.0, 1.0, //
        0.0, 0.0, -1.0, 0.0,
    )
}

/// Mean vector and symmetrized covariance matrix of a two-mode state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentState {
    mean: Vector4<f64>,
    cov: Matrix4<f64>,
}

impl MomentState {
    /// Builds a state after checking symmetry, positive diagonal and the
    /// uncertainty principle `cov + (i hbar / 2) Omega >= 0`.
    pub fn new(mean: Vector4<f64>, cov: Matrix4<f64>, hbar: f64) -> Result<Self> {
        let state = Self { mean, cov };
        state.check(hbar)?;
        Ok(state)
    }

    /// Builds a state without any physical checks.
    ///
    /// Used for moments read off numerically (e.g. from the Fock oracle),
    /// where small truncation noise is expected and validated separately.
    pub fn new_unchecked(mean: Vector4<f64>, cov: Matrix4<f64>) -> Self {
        Self { mean, cov }
    }

    pub fn mean(&self) -> &Vector4<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &Matrix4<f64> {
        &self.cov
    }

    /// Entry of the covariance matrix for two quadratures.
    pub fn covariance(&self, a: (ModeIndex, Quadrature), b: (ModeIndex, Quadrature)) -> f64 {
        self.cov[(a.1.index(a.0), b.1.index(b.0))]
    }

    pub fn check(&self, hbar: f64) -> Result<()> {
        if self.mean.iter().chain(self.cov.iter()).any(|v| !v.is_finite()) {
            return Err(Error::NotPhysical("non-finite entry".into()));
        }
        let asym = (self.cov - self.cov.transpose()).amax();
        if asym > SYMMETRY_TOL {
            return Err(Error::NotPhysical(format!(
                "covariance not symmetric (max |C - C^T| = {asym:e})"
            )));
        }
        if let Some(i) = (0..4).find(|&i| self.cov[(i, i)] <= 0.0) {
            return Err(Error::NotPhysical(format!("non-positive variance at index {i}")));
        }
        let floor = self.uncertainty_floor(hbar);
        if floor < -STRUCTURAL_TOL {
            return Err(Error::NotPhysical(format!(
                "uncertainty principle violated (min eigenvalue of cov + i hbar/2 Omega = {floor:e})"
            )));
        }
        Ok(())
    }

    /// Smallest eigenvalue of the Hermitian matrix `cov + (i hbar / 2) Omega`.
    pub fn uncertainty_floor(&self, hbar: f64) -> f64 {
        let omega = symplectic_form();
        let herm = Matrix4::from_fn(|r, c| {
            Complex::new(0.5 * (self.cov[(r, c)] + self.cov[(c, r)]), 0.5 * hbar * omega[(r, c)])
        });
        SymmetricEigen::new(herm)
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// Symplectic eigenvalues (Williamson normal form), ascending.
    ///
    /// Computed as the positive eigenvalues of the Hermitian matrix
    /// `i C^{1/2} Omega C^{1/2}`. Requires a positive-definite covariance.
    pub fn symplectic_eigenvalues(&self) -> [f64; 2] {
        let sym = (self.cov + self.cov.transpose()) * 0.5;
        let eig = SymmetricEigen::new(sym);
        let root_vals = eig.eigenvalues.map(|v| v.max(0.0).sqrt());
        let root = eig.eigenvectors * Matrix4::from_diagonal(&root_vals) * eig.eigenvectors.transpose();
        let inner = root * symplectic_form() * root;
        let herm = inner.map(|v| Complex::new(0.0, v));
        let mut vals: Vec<f64> = SymmetricEigen::new(herm)
            .eigenvalues
            .iter()
            .copied()
            .filter(|v| *v > 0.0)
            .collect();
        vals.sort_by(|a, b| a.total_cmp(b));
        while vals.len() < 2 {
            vals.insert(0, 0.0);
        }
        [vals[0], vals[1]]
    }
}

/// Ground state of both modes: zero mean and `cov = diag(hbar/2m1w1,
/// m1 hbar w1/2, hbar/2m2w2, m2 hbar w2/2)`.
pub fn vacuum_state(system: &TwoModeSystem) -> MomentState {
    let hbar = system.hbar();
    let m1 = &system.mode1;
    let m2 = &system.mode2;
    MomentState {
        mean: Vector4::zeros(),
        cov: Matrix4::from_diagonal(&Vector4::new(
            m1.position_variance(hbar),
            m1.momentum_variance(hbar),
            m2.position_variance(hbar),
            m2.momentum_variance(hbar),
        )),
    }
}

/// One violated canonicity condition of an LCT.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintViolation {
    pub constraint: &'static str,
    pub expected: f64,
    pub actual: f64,
}

impl ConstraintViolation {
    pub fn residual(&self) -> f64 {
        (self.actual - self.expected).abs()
    }
}

impl fmt::Display for ConstraintViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} = {} (expected {}, residual {:e})",
            self.constraint,
            self.actual,
            self.expected,
            self.residual()
        )
    }
}

/// Checks the four canonicity sums, which together say `M N^T = I`.
///
/// `position` has rows `(alpha1, alpha2)` and `(beta1, beta2)`; `momentum` has
/// rows `(gamma1, gamma2)` and `(delta1, delta2)`. Returns an empty list iff
/// every sum holds within `tol`.
pub fn validate_lct(position: &Matrix2<f64>, momentum: &Matrix2<f64>, tol: f64) -> Vec<ConstraintViolation> {
    const NAMES: [[&str; 2]; 2] = [
        ["sum alpha_i gamma_i", "sum alpha_i delta_i"],
        ["sum beta_i gamma_i", "sum beta_i delta_i"],
    ];
    let product = position * momentum.transpose();
    let mut violations = Vec::new();
    for r in 0..2 {
        for c in 0..2 {
            let expected = if r == c { 1.0 } else { 0.0 };
            let actual = product[(r, c)];
            if !((actual - expected).abs() <= tol) {
                violations.push(ConstraintViolation {
                    constraint: NAMES[r][c],
                    expected,
                    actual,
                });
            }
        }
    }
    violations
}

/// Linear canonical transformation mixing positions with positions and
/// momenta with momenta:
///
/// ```text
/// X_A = a1 x1 + a2 x2    P_A  = g1 p1 + g2 p2
/// xi_B = b1 x1 + b2 x2   pi_B = d1 p1 + d2 p2
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lct {
    position: Matrix2<f64>,
    momentum: Matrix2<f64>,
}

impl Lct {
    /// Accepts both blocks after checking canonicity at [`STRUCTURAL_TOL`].
    pub fn new(position: Matrix2<f64>, momentum: Matrix2<f64>) -> Result<Self> {
        Self::with_tolerance(position, momentum, STRUCTURAL_TOL)
    }

    pub fn with_tolerance(position: Matrix2<f64>, momentum: Matrix2<f64>, tol: f64) -> Result<Self> {
        let det = position.determinant();
        if !(det.abs() > SINGULAR_DET) {
            return Err(Error::SingularMatrix { det });
        }
        let violations = validate_lct(&position, &momentum, tol);
        if !violations.is_empty() {
            return Err(Error::InvalidLct(violations));
        }
        Ok(Self { position, momentum })
    }

    /// The unique LCT with the given position block; the momentum block is
    /// forced to `(M^T)^{-1}`.
    pub fn from_position_block(position: Matrix2<f64>) -> Result<Self> {
        let det = position.determinant();
        if !(det.abs() > SINGULAR_DET) {
            return Err(Error::SingularMatrix { det });
        }
        // Closed-form 2x2 inverse-transpose: (M^T)^{-1} = adj(M)^T / det.
        let momentum = Matrix2::new(position[(1, 1)], -position[(1, 0)], -position[(0, 1)], position[(0, 0)]) / det;
        Ok(Self { position, momentum })
    }

    pub fn identity() -> Self {
        Self {
            position: Matrix2::identity(),
            momentum: Matrix2::identity(),
        }
    }

    pub fn position_block(&self) -> &Matrix2<f64> {
        &self.position
    }

    pub fn momentum_block(&self) -> &Matrix2<f64> {
        &self.momentum
    }

    pub fn alpha(&self) -> [f64; 2] {
        [self.position[(0, 0)], self.position[(0, 1)]]
    }

    pub fn beta(&self) -> [f64; 2] {
        [self.position[(1, 0)], self.position[(1, 1)]]
    }

    pub fn gamma(&self) -> [f64; 2] {
        [self.momentum[(0, 0)], self.momentum[(0, 1)]]
    }

    pub fn delta(&self) -> [f64; 2] {
        [self.momentum[(1, 0)], self.momentum[(1, 1)]]
    }

    pub fn validate(&self, tol: f64) -> Vec<ConstraintViolation> {
        validate_lct(&self.position, &self.momentum, tol)
    }

    /// The 4x4 phase-space map taking `(x1, p1, x2, p2)` to
    /// `(X_A, P_A, xi_B, pi_B)`.
    pub fn phase_space_matrix(&self) -> Matrix4<f64> {
        let (m, n) = (&self.position, &self.momentum);
        Matrix4::new(
            m[(0, 0)],
            0.0,
            m[(0, 1)],
            0.0, //
            0.0,
            n[(0, 0)],
            0.0,
            n[(0, 1)], //
            m[(1, 0)],
            0.0,
            m[(1, 1)],
            0.0, //
            0.0,
            n[(1, 0)],
            0.0,
            n[(1, 1)],
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn unit_system() -> TwoModeSystem {
        let mode = ModeParams::new(1.0, 1.0, 0.3).unwrap();
        TwoModeSystem::new(mode, mode, PhysicalConstants::default())
    }

    #[test]
    fn vacuum_unit_modes() {
        let vac = vacuum_state(&unit_system());
        assert_eq!(*vac.cov(), Matrix4::from_diagonal_element(0.5));
        assert_eq!(*vac.mean(), Vector4::zeros());
    }

    #[test]
    fn vacuum_unequal_masses() {
        let sys = TwoModeSystem::new(
            ModeParams::new(1.0, 1.0, 0.1).unwrap(),
            ModeParams::new(2.0, 1.0, 0.1).unwrap(),
            PhysicalConstants::default(),
        );
        let cov = *vacuum_state(&sys).cov();
        assert_eq!(cov, Matrix4::from_diagonal(&Vector4::new(0.5, 0.5, 0.25, 1.0)));
        for mode in [ModeIndex::One, ModeIndex::Two] {
            let i = mode.offset();
            assert_eq!((cov[(i, i)] * cov[(i + 1, i + 1)]).sqrt(), 0.5);
        }
    }

    #[test]
    fn vacuum_is_minimal_uncertainty() {
        let sys = TwoModeSystem::new(
            ModeParams::new(0.7, 2.3, 0.0).unwrap(),
            ModeParams::new(1.9, 0.4, 1.0).unwrap(),
            PhysicalConstants::new(0.8).unwrap(),
        );
        let vac = vacuum_state(&sys);
        vac.check(0.8).unwrap();
        let [lo, hi] = vac.symplectic_eigenvalues();
        assert!((lo - 0.4).abs() < 1e-12, "{lo}");
        assert!((hi - 0.4).abs() < 1e-12, "{hi}");
        assert!(vac.uncertainty_floor(0.8).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(ModeParams::new(0.0, 1.0, 0.0).is_err());
        assert!(ModeParams::new(1.0, -1.0, 0.0).is_err());
        assert!(ModeParams::new(1.0, 1.0, -0.1).is_err());
        assert!(ModeParams::new(1.0, 1.0, f64::NAN).is_err());
        assert!(PhysicalConstants::new(0.0).is_err());
    }

    #[test]
    fn rejects_sub_heisenberg_covariance() {
        let cov = Matrix4::from_diagonal(&Vector4::new(0.1, 0.1, 0.5, 0.5));
        assert!(matches!(
            MomentState::new(Vector4::zeros(), cov, 1.0),
            Err(Error::NotPhysical(_))
        ));
        let mut asym = Matrix4::from_diagonal_element(1.0);
        asym[(0, 2)] = 0.1;
        assert!(MomentState::new(Vector4::zeros(), asym, 1.0).is_err());
    }

    #[test]
    fn identity_lct_is_valid() {
        assert!(validate_lct(&Matrix2::identity(), &Matrix2::identity(), STRUCTURAL_TOL).is_empty());
    }

    #[test]
    fn center_of_mass_blocks_are_valid() {
        let m = Matrix2::new(0.5, 0.5, 1.0, -1.0);
        let n = Matrix2::new(1.0, 1.0, 0.5, -0.5);
        assert!(validate_lct(&m, &n, STRUCTURAL_TOL).is_empty());
        assert!(Lct::new(m, n).is_ok());
    }

    #[test]
    fn constructed_violation_is_reported() {
        let m = Matrix2::new(1.0, 0.0, 1.0, 1.0);
        let n = Matrix2::new(0.0, 1.0, 1.0, 1.0);
        let report = validate_lct(&m, &n, STRUCTURAL_TOL);
        let ag = report
            .iter()
            .find(|v| v.constraint == "sum alpha_i gamma_i")
            .expect("alpha.gamma violation reported");
        assert_eq!(ag.actual, 0.0);
        assert_eq!(ag.residual(), 1.0);
        assert!(matches!(Lct::new(m, n), Err(Error::InvalidLct(_))));
    }

    #[test]
    fn position_block_examples() {
        let id = Lct::from_position_block(Matrix2::identity()).unwrap();
        assert_eq!(*id.momentum_block(), Matrix2::identity());

        let com = Lct::from_position_block(Matrix2::new(0.5, 0.5, 1.0, -1.0)).unwrap();
        let expected = Matrix2::new(1.0, 1.0, 0.5, -0.5);
        assert!((com.momentum_block() - expected).amax() < 1e-15);

        assert!(matches!(
            Lct::from_position_block(Matrix2::new(1.0, 1.0, 1.0, 1.0)),
            Err(Error::SingularMatrix { .. })
        ));
    }

    proptest! {
        #[test]
        fn position_block_always_canonical(
            a in -3.0f64..3.0, b in -3.0f64..3.0, c in -3.0f64..3.0, d in -3.0f64..3.0,
        ) {
            let m = Matrix2::new(a, b, c, d);
            let det = m.determinant();
            let cond = m.norm() * m.norm() / det.abs();
            prop_assume!(det.abs() > 0.05 && cond < 1e3);
            let lct = Lct::from_position_block(m).unwrap();
            prop_assert!(lct.validate(STRUCTURAL_TOL).is_empty());
        }
    }
}
