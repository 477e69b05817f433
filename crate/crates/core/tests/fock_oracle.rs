use ampdamp::analytic::evolve_state;
use ampdamp::fock::{
    coherent_density, evolve_density, fock_density, heisenberg_moment, kraus_operators, kron, lowering,
    trace_and_hermiticity, tracked_moments, OperatorMatrix,
};
use ampdamp::{vacuum_state, ModeParams, MomentState, PhysicalConstants, TwoModeSystem};
use nalgebra::Vector4;
use num_complex::Complex64;
use proptest::prelude::*;

fn system(k1: f64, k2: f64) -> TwoModeSystem {
    TwoModeSystem::new(
        ModeParams::new(1.3, 0.8, k1).unwrap(),
        ModeParams::new(0.7, 1.6, k2).unwrap(),
        PhysicalConstants::default(),
    )
}

fn coherent_moments(sys: &TwoModeSystem, a1: Complex64, a2: Complex64) -> MomentState {
    let h = sys.hbar();
    let q = |m: &ModeParams, a: Complex64| {
        (
            (2.0 * h / (m.mass() * m.omega())).sqrt() * a.re,
            (2.0 * m.mass() * h * m.omega()).sqrt() * a.im,
        )
    };
    let (x1, p1) = q(&sys.mode1, a1);
    let (x2, p2) = q(&sys.mode2, a2);
    MomentState::new(Vector4::new(x1, p1, x2, p2), *vacuum_state(sys).cov(), h).unwrap()
}

fn deviation(a: &MomentState, b: &MomentState) -> f64 {
    (a.mean() - b.mean()).amax().max((a.cov() - b.cov()).amax())
}

fn alpha() -> impl Strategy<Value = Complex64> {
    (0.0..2.0f64, 0.0..std::f64::consts::TAU).prop_map(|(r, th)| Complex64::from_polar(r, th))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn engines_agree_on_coherent_inputs(
        a1 in alpha(), a2 in alpha(), k1 in 0.05..1.0f64, k2 in 0.05..1.0f64, frac in 0.0..1.0f64,
    ) {
        let dim = 30;
        let sys = system(k1, k2);
        let t = frac * 3.0 / k1.max(k2);
        let rho = kron(&coherent_density(a1, dim).unwrap(), &coherent_density(a2, dim).unwrap()).unwrap();
        let ks1 = kraus_operators(k1, t, dim).unwrap();
        let ks2 = kraus_operators(k2, t, dim).unwrap();
        let numeric = tracked_moments(&rho, &sys, &ks1, &ks2).unwrap();
        let exact = evolve_state(&coherent_moments(&sys, a1, a2), &sys, t).unwrap();
        prop_assert!(deviation(&numeric, &exact) <= 1e-8, "{}", deviation(&numeric, &exact));
    }

    #[test]
    fn field_moments_decay_geometrically(a in alpha(), kappa in 0.1..2.0f64, t in 0.0..3.0f64) {
        let dim = 40;
        let rho = evolve_density(&coherent_density(a, dim).unwrap(), &kraus_operators(kappa, t, dim).unwrap(), None).unwrap();
        let low = lowering(dim).unwrap();
        let low2 = low.compose(&low).unwrap();
        let damp = (-kappa * t).exp();
        prop_assert!((low.expectation(&rho).unwrap() - a * damp).norm() <= 1e-9);
        prop_assert!((low2.expectation(&rho).unwrap() - a * a * damp * damp).norm() <= 1e-9);
    }
}

#[test]
fn cross_moments_factorize_on_product_inputs() {
    let dim = 24;
    let (a1, a2) = (Complex64::new(0.8, -0.3), Complex64::new(-0.4, 1.1));
    let rho = kron(&coherent_density(a1, dim).unwrap(), &coherent_density(a2, dim).unwrap()).unwrap();
    let low = lowering(dim).unwrap();
    let ident = OperatorMatrix::identity(dim, 1).unwrap();
    for t in [0.0, 0.4, 1.5] {
        let ks1 = kraus_operators(0.6, t, dim).unwrap();
        let ks2 = kraus_operators(0.2, t, dim).unwrap();
        let joint = heisenberg_moment(&low, Some(&low.adjoint()), &ks1, &ks2, &rho).unwrap();
        let m1 = heisenberg_moment(&low, Some(&ident), &ks1, &ks2, &rho).unwrap();
        let m2 = heisenberg_moment(&ident, Some(&low.adjoint()), &ks1, &ks2, &rho).unwrap();
        assert!((joint - m1 * m2).norm() <= 1e-9);
    }
}

#[test]
fn moments_converge_in_the_cutoff() {
    let sys = system(0.5, 0.2);
    let (a1, a2) = (Complex64::new(1.0, 0.5), Complex64::new(0.0, -1.2));
    let at = |dim: usize| {
        let rho = kron(&coherent_density(a1, dim).unwrap(), &coherent_density(a2, dim).unwrap()).unwrap();
        let ks1 = kraus_operators(0.5, 1.0, dim).unwrap();
        let ks2 = kraus_operators(0.2, 1.0, dim).unwrap();
        tracked_moments(&rho, &sys, &ks1, &ks2).unwrap()
    };
    assert!(deviation(&at(20), &at(30)) < 1e-9);
}

#[test]
fn evolved_densities_stay_physical() {
    let dim = 10;
    let inputs = [
        kron(
            &fock_density(3, dim).unwrap(),
            &coherent_density(Complex64::new(0.7, 0.2), dim).unwrap(),
        )
        .unwrap(),
        kron(
            &coherent_density(Complex64::new(-1.0, 0.4), dim).unwrap(),
            &fock_density(1, dim).unwrap(),
        )
        .unwrap(),
    ];
    for rho0 in &inputs {
        for t in [0.0, 0.3, 1.0, 4.0] {
            let rho = evolve_density(
                rho0,
                &kraus_operators(0.9, t, dim).unwrap(),
                Some(&kraus_operators(0.25, t, dim).unwrap()),
            )
            .unwrap();
            let (trace_defect, herm) = trace_and_hermiticity(&rho);
            assert!(trace_defect <= 1e-10, "t={t}: {trace_defect}");
            assert!(herm <= 1e-12);
            assert!(rho.min_eigenvalue() >= -1e-10);
        }
    }
}
