use crate::error::Result;
use crate::linalg::{try_inverse, Mat};

/// Spatial `Ω = φ̇φ⁻¹` and co-moving `Ω̂ = φ⁻¹φ̇` affine velocities.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineVelocity {
    pub omega: Mat,
    pub omega_hat: Mat,
}

pub fn affine_velocity(phi: &Mat, phidot: &Mat) -> Result<AffineVelocity> {
    let phi_inv = try_inverse(phi)?;
    Ok(AffineVelocity {
        omega: phidot * &phi_inv,
        omega_hat: &phi_inv * phidot,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs;

    #[test]
    fn antisymmetric_rate_at_identity() {
        let w = Mat::from_row_slice(2, 2, &[0.0, 0.4, -0.4, 0.0]);
        let v = affine_velocity(&Mat::identity(2, 2), &w).unwrap();
        assert_eq!(v.omega, w);
        assert_eq!(v.omega_hat, w);
    }

    #[test]
    fn dilatation_rate() {
        let phi = Mat::from_row_slice(2, 2, &[1.3, 0.2, -0.1, 0.8]);
        let v = affine_velocity(&phi, &(&phi * 0.7)).unwrap();
        assert!(max_abs(&(v.omega_hat - Mat::identity(2, 2) * 0.7)) < 1e-14);
        assert!(max_abs(&(v.omega - Mat::identity(2, 2) * 0.7)) < 1e-14);
    }

    #[test]
    fn conjugation_identity() {
        let phi = Mat::from_row_slice(3, 3, &[1.3, 0.2, 0.0, -0.1, 0.8, 0.3, 0.2, 0.1, 1.1]);
        let phidot = Mat::from_row_slice(3, 3, &[0.1, -0.5, 0.3, 0.9, 0.2, -0.4, 0.0, 0.6, 0.7]);
        let v = affine_velocity(&phi, &phidot).unwrap();
        let back = &phi * &v.omega_hat * phi.clone().try_inverse().unwrap();
        assert!(max_abs(&(back - &v.omega)) < 1e-12);
        assert!((v.omega.trace() - v.omega_hat.trace()).abs() < 1e-12);
    }
}
