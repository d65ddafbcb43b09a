use crate::error::{Error, Result};
use crate::geometry::MetricPair;
use crate::linalg::{try_inverse, Mat, Vector};

/// Translational position plus the internal configuration matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    x: Vector,
    phi: Mat,
}

impl Configuration {
    pub fn new(x: Vector, phi: Mat) -> Result<Self> {
        if !phi.is_square() || phi.nrows() != x.len() {
            return Err(Error::ShapeError(format!(
                "position of length {} with configuration {:?}",
                x.len(),
                phi.shape()
            )));
        }
        let det = phi.determinant();
        if det <= 0.0 || !det.is_finite() {
            return Err(Error::OrientationError { det });
        }
        Ok(Self { x, phi })
    }

    pub fn x(&self) -> &Vector {
        &self.x
    }

    pub fn phi(&self) -> &Mat {
        &self.phi
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }
}

/// Green, Cauchy, Lagrange and Euler tensors of one configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct DeformationTensors {
    pub green: Mat,
    pub cauchy: Mat,
    pub lagrange: Mat,
    pub euler: Mat,
}

/// `G = φᵀ g φ`, `C = φ⁻ᵀ η φ⁻¹`, `E = (G − η)/2`, `e = (g − C)/2`.
pub fn green_cauchy(phi: &Mat, metrics: &MetricPair) -> Result<DeformationTensors> {
    let phi_inv = try_inverse(phi)?;
    let green = phi.transpose() * metrics.g() * phi;
    let cauchy = phi_inv.transpose() * metrics.eta() * &phi_inv;
    let lagrange = (&green - metrics.eta()) * 0.5;
    let euler = (metrics.g() - &cauchy) * 0.5;
    Ok(DeformationTensors {
        green,
        cauchy,
        lagrange,
        euler,
    })
}
