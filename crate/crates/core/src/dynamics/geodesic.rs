use crate::linalg::Mat;

/// Geodesic of the affine-affine geodetic model: `φ(t) = φ₀ exp(t Ω̂₀)`.
///
/// The co-moving velocity, hence `Σ̂`, is constant along the curve.
pub fn geodesic_exponential(phi0: &Mat, omega_hat0: &Mat, t: f64) -> Mat {
    phi0 * (omega_hat0 * t).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{inverse_legendre, InertiaModel};
    use crate::geometry::MetricPair;
    use crate::kinematics::PhasePoint;

    #[test]
    fn zero_velocity_is_stationary() {
        let phi0 = Mat::from_row_slice(2, 2, &[1.3, 0.2, -0.1, 0.8]);
        assert_eq!(geodesic_exponential(&phi0, &Mat::zeros(2, 2), 2.5), phi0);
    }

    #[test]
    fn uniform_dilatation() {
        let phi0 = Mat::from_row_slice(2, 2, &[1.3, 0.2, -0.1, 0.8]);
        let xi = 0.4;
        let phi = geodesic_exponential(&phi0, &(Mat::identity(2, 2) * xi), 1.5);
        assert!((phi - &phi0 * (xi * 1.5).exp()).amax() < 1e-13);
    }

    #[test]
    fn sigma_hat_is_constant() {
        let phi0 = Mat::from_row_slice(3, 3, &[1.3, 0.2, 0.0, -0.1, 0.8, 0.3, 0.2, 0.1, 1.6]);
        let w = Mat::from_row_slice(3, 3, &[0.1, -0.5, 0.3, 0.9, 0.2, -0.4, 0.0, 0.6, 0.7]);
        let model = InertiaModel::AffineAffine { m: 1.0, a: 1.0, b: 0.2 };
        let sigma_hat = &w + Mat::identity(3, 3) * (0.2 * w.trace());
        let phi = geodesic_exponential(&phi0, &w, 0.8);
        let pi = &sigma_hat * phi.clone().try_inverse().unwrap();
        let pt = PhasePoint::internal(phi.clone(), pi).unwrap();
        let vel = inverse_legendre(&model, &MetricPair::euclidean(3), &pt).unwrap();
        let w_now = phi.try_inverse().unwrap() * vel.phidot;
        assert!((w_now - w).amax() < 1e-12);
    }
}
