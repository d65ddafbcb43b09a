use crate::error::{Error, Result};
use crate::geometry::MetricPair;
use crate::linalg::{symmetric_eigen_ascending, try_inverse, Mat};

/// `phi = U A` with `U` an `(eta, g)` isometry and `A` eta-symmetric positive.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarForm {
    pub u: Mat,
    pub a: Mat,
}

impl PolarForm {
    pub fn compose(&self) -> Mat {
        &self.u * &self.a
    }

    /// Spatial stretch `B = U A U⁻¹`, so that `phi = B U`.
    pub fn spatial_stretch(&self) -> Mat {
        let u_inv = self.u.clone().try_inverse().expect("isometry is invertible");
        &self.u * &self.a * u_inv
    }
}

/// Polar decomposition with `A` the principal square root of `Ĝ = η⁻¹G`.
pub fn polar_decompose(phi: &Mat, metrics: &MetricPair) -> Result<PolarForm> {
    let det = phi.determinant();
    if det <= 0.0 || !det.is_finite() {
        return Err(Error::OrientationError { det });
    }
    // In the Euclidean chart Ĝ is similar to φ'ᵀφ' through leᵀ.
    let chart = metrics.to_euclidean_chart(phi);
    let (vals, vecs) = symmetric_eigen_ascending(&(chart.transpose() * &chart));
    let root = &vecs * Mat::from_diagonal(&vals.map(f64::sqrt)) * vecs.transpose();
    let a = material_similarity(metrics, &root);
    let u = phi * try_inverse(&a)?;
    Ok(PolarForm { u, a })
}

/// Carries a symmetric operator on the Euclidean material chart back:
/// `le⁻ᵀ S leᵀ`.
fn material_similarity(metrics: &MetricPair, s: &Mat) -> Mat {
    let n = s.nrows();
    let le_inv_t = metrics.material_frame(&Mat::identity(n, n));
    let le_t = le_inv_t.clone().try_inverse().expect("Cholesky factor is invertible");
    le_inv_t * s * le_t
}
