use nalgebra::Cholesky;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{is_symmetric, symmetric_eigen_ascending, Mat};

const SYMMETRY_TOL: f64 = 1e-12;

/// Spatial metric `g` and material metric `eta`.
///
/// Both are symmetric positive-definite. The Cholesky factors are kept so
/// that configurations can be carried to the Euclidean chart by congruence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MetricPairRepr", into = "MetricPairRepr")]
pub struct MetricPair {
    g: Mat,
    eta: Mat,
    g_inv: Mat,
    eta_inv: Mat,
    // g = lg lgᵀ, eta = le leᵀ
    lg: Mat,
    le: Mat,
}

impl MetricPair {
    pub fn new(g: Mat, eta: Mat) -> Result<Self> {
        if g.shape() != eta.shape() || !g.is_square() {
            return Err(Error::InvalidMetric(format!(
                "metric shapes differ or are not square: g {:?}, eta {:?}",
                g.shape(),
                eta.shape()
            )));
        }
        for (name, m) in [("g", &g), ("eta", &eta)] {
            if !is_symmetric(m, SYMMETRY_TOL) {
                return Err(Error::InvalidMetric(format!("{name} is not symmetric")));
            }
            let (vals, _) = symmetric_eigen_ascending(m);
            if vals[0] <= 0.0 {
                return Err(Error::InvalidMetric(format!(
                    "{name} is not positive-definite (min eigenvalue {:e})",
                    vals[0]
                )));
            }
        }
        let lg = Cholesky::new(g.clone())
            .ok_or_else(|| Error::InvalidMetric("g Cholesky failed".into()))?
            .l();
        let le = Cholesky::new(eta.clone())
            .ok_or_else(|| Error::InvalidMetric("eta Cholesky failed".into()))?
            .l();
        let g_inv = g.clone().try_inverse().expect("SPD matrix is invertible");
        let eta_inv = eta.clone().try_inverse().expect("SPD matrix is invertible");
        Ok(Self {
            g,
            eta,
            g_inv,
            eta_inv,
            lg,
            le,
        })
    }

    pub fn euclidean(n: usize) -> Self {
        Self::new(Mat::identity(n, n), Mat::identity(n, n)).expect("identity metrics are valid")
    }

    pub fn dim(&self) -> usize {
        self.g.nrows()
    }

    pub fn g(&self) -> &Mat {
        &self.g
    }

    pub fn eta(&self) -> &Mat {
        &self.eta
    }

    pub fn g_inv(&self) -> &Mat {
        &self.g_inv
    }

    pub fn eta_inv(&self) -> &Mat {
        &self.eta_inv
    }

    pub fn is_euclidean(&self) -> bool {
        let id = Mat::identity(self.dim(), self.dim());
        self.g == id && self.eta == id
    }

    /// Carries `phi` to the chart where both metrics are the identity:
    /// `phi' = lgᵀ phi le⁻ᵀ`.
    pub fn to_euclidean_chart(&self, phi: &Mat) -> Mat {
        let le_inv_t = self
            .le
            .clone()
            .try_inverse()
            .expect("Cholesky factor is invertible")
            .transpose();
        self.lg.transpose() * phi * le_inv_t
    }

    /// Inverse of [`to_euclidean_chart`](Self::to_euclidean_chart).
    pub fn from_euclidean_chart(&self, phi_chart: &Mat) -> Mat {
        let lg_inv_t = self
            .lg
            .clone()
            .try_inverse()
            .expect("Cholesky factor is invertible")
            .transpose();
        lg_inv_t * phi_chart * self.le.transpose()
    }

    /// Carries a covector `F'` with `dV = Tr(F' dφ')` on the Euclidean chart
    /// back to the original chart: `F = le⁻ᵀ F' lgᵀ`.
    pub fn covector_from_euclidean_chart(&self, f_chart: &Mat) -> Mat {
        let le_inv_t = self.le.clone().try_inverse().unwrap().transpose();
        le_inv_t * f_chart * self.lg.transpose()
    }

    /// Maps an orthogonal matrix in the Euclidean chart to a `(δ, g)` isometry.
    pub fn spatial_frame(&self, l_chart: &Mat) -> Mat {
        let lg_inv_t = self.lg.clone().try_inverse().unwrap().transpose();
        lg_inv_t * l_chart
    }

    /// Maps an orthogonal matrix in the Euclidean chart to a `(δ, eta)` isometry.
    pub fn material_frame(&self, r_chart: &Mat) -> Mat {
        let le_inv_t = self.le.clone().try_inverse().unwrap().transpose();
        le_inv_t * r_chart
    }
}

#[derive(Serialize, Deserialize)]
struct MetricPairRepr {
    g: Vec<Vec<f64>>,
    eta: Vec<Vec<f64>>,
}

impl TryFrom<MetricPairRepr> for MetricPair {
    type Error = Error;

    fn try_from(r: MetricPairRepr) -> Result<Self> {
        MetricPair::new(rows_to_mat(&r.g)?, rows_to_mat(&r.eta)?)
    }
}

impl From<MetricPair> for MetricPairRepr {
    fn from(m: MetricPair) -> Self {
        Self {
            g: mat_to_rows(&m.g),
            eta: mat_to_rows(&m.eta),
        }
    }
}

pub(crate) fn rows_to_mat(rows: &[Vec<f64>]) -> Result<Mat> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(Error::ShapeError("expected a non-empty square matrix".into()));
    }
    Ok(Mat::from_fn(n, n, |i, j| rows[i][j]))
}

pub(crate) fn mat_to_rows(m: &Mat) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}
