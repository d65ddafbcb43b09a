use crate::error::{Error, Result};
use crate::linalg::{all_finite, Mat, Vector};

/// Canonical phase point `(x, φ; p, P)`.
///
/// `P[(A, i)]` is conjugate to `φ[(i, A)]`, so the Liouville pairing reads
/// `p·ẋ + Tr(P φ̇)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhasePoint {
    pub x: Vector,
    pub phi: Mat,
    pub p: Vector,
    pub pi: Mat,
}

impl PhasePoint {
    pub fn new(x: Vector, phi: Mat, p: Vector, pi: Mat) -> Result<Self> {
        let n = x.len();
        if phi.shape() != (n, n) || pi.shape() != (n, n) || p.len() != n {
            return Err(Error::ShapeError(format!(
                "phase point blocks disagree: x {n}, phi {:?}, p {}, P {:?}",
                phi.shape(),
                p.len(),
                pi.shape()
            )));
        }
        let pt = Self { x, phi, p, pi };
        if !pt.is_finite() {
            return Err(Error::NumericalFailure("non-finite phase point".into()));
        }
        let det = pt.phi.determinant();
        if det <= 0.0 {
            return Err(Error::OrientationError { det });
        }
        Ok(pt)
    }

    /// Internal-only phase point at rest translationally.
    pub fn internal(phi: Mat, pi: Mat) -> Result<Self> {
        let n = phi.nrows();
        Self::new(Vector::zeros(n), phi, Vector::zeros(n), pi)
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    pub fn is_finite(&self) -> bool {
        self.x.iter().all(|v| v.is_finite())
            && self.p.iter().all(|v| v.is_finite())
            && all_finite(&self.phi)
            && all_finite(&self.pi)
    }

    /// Flattens into matched coordinate and momentum arrays of length `n + n²`.
    ///
    /// Slot `n + i·n + A` holds `φ[(i, A)]` and its conjugate `P[(A, i)]`.
    pub fn to_canonical(&self) -> (Vec<f64>, Vec<f64>) {
        let n = self.dim();
        let mut q = Vec::with_capacity(n + n * n);
        let mut p = Vec::with_capacity(n + n * n);
        q.extend(self.x.iter());
        p.extend(self.p.iter());
        for i in 0..n {
            for a in 0..n {
                q.push(self.phi[(i, a)]);
                p.push(self.pi[(a, i)]);
            }
        }
        (q, p)
    }

    /// Inverse of [`to_canonical`](Self::to_canonical); no validation.
    pub fn from_canonical(n: usize, q: &[f64], p: &[f64]) -> Self {
        let x = Vector::from_column_slice(&q[..n]);
        let pv = Vector::from_column_slice(&p[..n]);
        let mut phi = Mat::zeros(n, n);
        let mut pi = Mat::zeros(n, n);
        for i in 0..n {
            for a in 0..n {
                phi[(i, a)] = q[n + i * n + a];
                pi[(a, i)] = p[n + i * n + a];
            }
        }
        Self { x, phi, p: pv, pi }
    }

    /// Packs the point as one state vector `[q; p]`.
    pub fn pack(&self) -> Vec<f64> {
        let (mut q, p) = self.to_canonical();
        q.extend(p);
        q
    }

    pub fn unpack(n: usize, z: &[f64]) -> Self {
        let half = n + n * n;
        Self::from_canonical(n, &z[..half], &z[half..])
    }
}

/// Time derivative of a phase point, laid out like [`PhasePoint`].
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseTangent {
    pub xdot: Vector,
    pub phidot: Mat,
    pub pdot: Vector,
    pub pidot: Mat,
}

impl PhaseTangent {
    pub fn pack(&self) -> Vec<f64> {
        PhasePoint {
            x: self.xdot.clone(),
            phi: self.phidot.clone(),
            p: self.pdot.clone(),
            pi: self.pidot.clone(),
        }
        .pack()
    }

    pub fn max_abs_diff(&self, other: &PhaseTangent) -> f64 {
        self.pack()
            .iter()
            .zip(other.pack())
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_roundtrip() {
        let phi = Mat::from_row_slice(2, 2, &[1.0, 0.2, 0.3, 1.1]);
        let pi = Mat::from_row_slice(2, 2, &[0.5, -0.1, 0.7, 0.2]);
        let pt = PhasePoint::new(
            Vector::from_vec(vec![1.0, 2.0]),
            phi,
            Vector::from_vec(vec![-1.0, 0.5]),
            pi,
        )
        .unwrap();
        assert_eq!(PhasePoint::unpack(2, &pt.pack()), pt);
        let (q, p) = pt.to_canonical();
        let pairing: f64 = q.iter().zip(&p).skip(2).map(|(a, b)| a * b).sum();
        assert!((pairing - (&pt.pi * &pt.phi).trace()).abs() < 1e-14);
    }
}
