use affine_core::dynamics::{inverse_legendre, kinetic_energy, kinetic_energy_alt, legendre, InertiaModel, Velocities};
use affine_core::geometry::{deformation_invariants, polar_decompose, two_polar_decompose};
use affine_core::kinematics::{casimir, casimir2_two_polar, spin_vorticity, two_polar_momenta};
use affine_core::linalg::{frobenius, jacobi_svd};
use affine_core::quantum::Tridiagonal;
use affine_core::{Mat, MetricPair, PhasePoint, Vector};
use approx::assert_relative_eq;
use proptest::prelude::*;

fn rot2(t: f64) -> Mat {
    Mat::from_row_slice(2, 2, &[t.cos(), -t.sin(), t.sin(), t.cos()])
}

fn rot3(a: f64, b: f64, c: f64) -> Mat {
    let z = |t: f64| Mat::from_row_slice(3, 3, &[t.cos(), -t.sin(), 0.0, t.sin(), t.cos(), 0.0, 0.0, 0.0, 1.0]);
    let x = |t: f64| Mat::from_row_slice(3, 3, &[1.0, 0.0, 0.0, 0.0, t.cos(), -t.sin(), 0.0, t.sin(), t.cos()]);
    z(a) * x(b) * z(c)
}

prop_compose! {
    fn gl_plus3()(a in -3.2..3.2f64, b in 0.0..3.1f64, c in -3.2..3.2f64,
                  d in -3.2..3.2f64, e in 0.0..3.1f64, f in -3.2..3.2f64,
                  s in prop::array::uniform3(-1.5..1.5f64)) -> Mat {
        rot3(a, b, c) * Mat::from_diagonal(&Vector::from_iterator(3, s.iter().map(|v| v.exp()))) * rot3(d, e, f)
    }
}

prop_compose! {
    fn gl_plus2()(a in -3.2..3.2f64, b in -3.2..3.2f64, s in prop::array::uniform2(-1.5..1.5f64)) -> Mat {
        rot2(a) * Mat::from_diagonal(&Vector::from_iterator(2, s.iter().map(|v| v.exp()))) * rot2(b)
    }
}

fn skewed_metrics() -> MetricPair {
    let g = Mat::from_row_slice(3, 3, &[2.0, 0.3, 0.1, 0.3, 1.2, -0.2, 0.1, -0.2, 0.9]);
    let eta = Mat::from_row_slice(3, 3, &[1.1, -0.4, 0.0, -0.4, 1.7, 0.2, 0.0, 0.2, 0.8]);
    MetricPair::new(g, eta).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn jacobi_svd_reconstructs(phi in gl_plus3()) {
        let (u, s, v) = jacobi_svd(&phi).unwrap();
        let back = &u * Mat::from_diagonal(&s) * v.transpose();
        prop_assert!(frobenius(&(back - &phi)) <= 1e-13 * frobenius(&phi));
        prop_assert!(frobenius(&(u.transpose() * &u - Mat::identity(3, 3))) <= 1e-13);
    }

    #[test]
    fn two_polar_reconstructs_and_orders(phi in gl_plus3()) {
        let tp = two_polar_decompose(&phi).unwrap();
        prop_assert!(frobenius(&(tp.compose() - &phi)) <= 1e-12 * frobenius(&phi));
        prop_assert!(tp.q[0] <= tp.q[1] && tp.q[1] <= tp.q[2]);
        prop_assert!(tp.l.determinant() > 0.0);
    }

    #[test]
    fn polar_reconstructs_under_skewed_metrics(phi in gl_plus3()) {
        let pf = polar_decompose(&phi, &skewed_metrics()).unwrap();
        prop_assert!(frobenius(&(pf.compose() - &phi)) <= 1e-12 * frobenius(&phi));
    }

    #[test]
    fn invariants_ignore_rotations(phi in gl_plus2(), a in -3.2..3.2f64, b in -3.2..3.2f64) {
        let m = MetricPair::euclidean(2);
        let q0 = deformation_invariants(&phi, &m).unwrap();
        let q1 = deformation_invariants(&(rot2(a) * &phi * rot2(b)), &m).unwrap();
        for k in 0..2 {
            assert_relative_eq!(q0[k], q1[k], epsilon = 1e-12);
        }
    }

    #[test]
    fn casimir_two_polar_matches_trace(phi in gl_plus3(), pi in prop::array::uniform9(-1.0..1.0f64)) {
        let pt = PhasePoint::new(Vector::zeros(3), phi.clone(), Vector::zeros(3), Mat::from_row_slice(3, 3, &pi)).unwrap();
        let sv = spin_vorticity(&pt, &MetricPair::euclidean(3)).unwrap();
        let tp = two_polar_decompose(&phi).unwrap();
        let tpm = two_polar_momenta(&pt, &tp).unwrap();
        let direct = casimir(&sv.sigma_hat, 2);
        assert_relative_eq!(casimir2_two_polar(&tp.q, &tpm), direct, epsilon = 1e-9 * (1.0 + direct.abs()));
    }

    #[test]
    fn legendre_roundtrip_and_energy_forms(phi in gl_plus3(), xd in prop::array::uniform3(-1.0..1.0f64),
                                           pd in prop::array::uniform9(-1.0..1.0f64), b in -0.25..0.8f64) {
        let metrics = skewed_metrics();
        let vel = Velocities { xdot: Vector::from_row_slice(&xd), phidot: Mat::from_row_slice(3, 3, &pd) };
        for model in [
            InertiaModel::AffineAffine { m: 1.0, a: 1.0, b },
            InertiaModel::AffineMetric { m: 2.0, i: 1.5, a: 0.4, b },
            InertiaModel::MetricAffine { m: 2.0, i: 1.5, a: -0.4, b },
        ] {
            let t = kinetic_energy(&model, &metrics, &phi, &vel).unwrap();
            let t_alt = kinetic_energy_alt(&model, &metrics, &phi, &vel).unwrap();
            assert_relative_eq!(t, t_alt, max_relative = 1e-10);
            let (p, pi) = legendre(&model, &metrics, &phi, &vel).unwrap();
            let pt = PhasePoint::new(Vector::zeros(3), phi.clone(), p, pi).unwrap();
            let back = inverse_legendre(&model, &metrics, &pt).unwrap();
            prop_assert!((back.phidot - &vel.phidot).amax() <= 1e-9 * (1.0 + vel.phidot.amax()));
        }
    }

    #[test]
    fn sturm_count_matches_dense(diag in prop::collection::vec(-5.0..5.0f64, 2..40), seed in 0u64..1000) {
        let n = diag.len();
        let off: Vec<f64> = (0..n - 1).map(|k| ((k as u64 * 7919 + seed) % 97) as f64 / 50.0 - 1.0).collect();
        let t = Tridiagonal::new(diag, off).unwrap();
        let mut dense: Vec<f64> = nalgebra::SymmetricEigen::new(t.to_dense()).eigenvalues.iter().copied().collect();
        dense.sort_by(f64::total_cmp);
        let k = n.min(5);
        for (a, b) in t.lowest_eigenvalues(k).iter().zip(&dense) {
            assert_relative_eq!(*a, *b, epsilon = 1e-9);
        }
    }
}
