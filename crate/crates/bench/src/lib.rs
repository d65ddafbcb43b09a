//! Fixed inputs shared by the criterion benches.

use affine_core::dynamics::{legendre, InertiaModel, Potential, System, Velocities};
use affine_core::quantum::Tridiagonal;
use affine_core::{Mat, MetricPair, PhasePoint, Vector};

/// A generic `GL⁺(n)` element with distinct singular values.
pub fn sample_phi(n: usize) -> Mat {
    Mat::from_fn(n, n, |i, j| {
        if i == j {
            1.2 + 0.3 * i as f64
        } else {
            0.1 * (i as f64 - 0.7 * j as f64)
        }
    })
}

/// Affine-affine system with a dilatational well and a matching phase point.
pub fn sample_system(n: usize) -> (System, PhasePoint) {
    let model = InertiaModel::AffineAffine { m: 1.0, a: 1.0, b: 0.3 };
    let metrics = MetricPair::euclidean(n);
    let phi = sample_phi(n);
    let vel = Velocities {
        xdot: Vector::from_fn(n, |i, _| 0.1 * i as f64),
        phidot: Mat::from_fn(n, n, |i, j| 0.2 * (i as f64 - j as f64) + 0.05),
    };
    let (p, pi) = legendre(&model, &metrics, &phi, &vel).expect("valid model");
    let point = PhasePoint::new(Vector::zeros(n), phi, p, pi).expect("det φ > 0");
    let system = System::new(model, Potential::DilatationHarmonic { kappa: 1.0 }, metrics).expect("valid system");
    (system, point)
}

/// Harmonic oscillator on `N` cells of `(−10, 10)`.
pub fn oscillator(n: usize) -> Tridiagonal {
    let h = 20.0 / n as f64;
    let diag = (0..n).map(|i| {
        let x = -10.0 + (i as f64 + 0.5) * h;
        1.0 / (h * h) + 0.5 * x * x
    });
    Tridiagonal::new(diag.collect(), vec![-0.5 / (h * h); n - 1]).expect("consistent lengths")
}
