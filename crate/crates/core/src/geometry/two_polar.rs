use crate::error::{Error, Result};
use crate::geometry::MetricPair;
use crate::linalg::{jacobi_svd, Mat, Vector};

const DEGENERACY_TOL: f64 = 1e-9;

/// `phi = L diag(e^q) Rᵀ` with `L`, `R` proper rotations and `q` ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoPolarForm {
    pub l: Mat,
    pub q: Vector,
    pub r: Mat,
    /// Two invariants coincide within tolerance; `L`, `R` are then not unique.
    pub degenerate: bool,
}

impl TwoPolarForm {
    pub fn dim(&self) -> usize {
        self.q.len()
    }

    pub fn stretches(&self) -> Vector {
        self.q.map(f64::exp)
    }

    pub fn d(&self) -> Mat {
        Mat::from_diagonal(&self.stretches())
    }

    pub fn compose(&self) -> Mat {
        &self.l * self.d() * self.r.transpose()
    }

    /// Maps `L`, `R` from the Euclidean chart to `(δ, g)` and `(δ, η)` isometries,
    /// so that `phi = L' D R'⁻¹` in the original chart.
    pub fn frames_in(&self, metrics: &MetricPair) -> (Mat, Mat) {
        (metrics.spatial_frame(&self.l), metrics.material_frame(&self.r))
    }
}

/// Two-polar (triple) decomposition in the Euclidean chart.
///
/// Sign ambiguities are removed by making the first significant entry of
/// each of the first `n−1` columns of `L` positive (flipping the matching
/// column of `R` with it); the last pair is fixed by `det L = +1`.
pub fn two_polar_decompose(phi: &Mat) -> Result<TwoPolarForm> {
    let n = phi.nrows();
    if !phi.is_square() || n == 0 {
        return Err(Error::ShapeError(format!(
            "expected square matrix, got {:?}",
            phi.shape()
        )));
    }
    let det = phi.determinant();
    if det <= 0.0 || !det.is_finite() {
        return Err(Error::OrientationError { det });
    }
    let (u, s, v) = jacobi_svd(phi)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| s[a].total_cmp(&s[b]));

    let mut l = Mat::zeros(n, n);
    let mut r = Mat::zeros(n, n);
    let mut q = Vector::zeros(n);
    for (k, &i) in order.iter().enumerate() {
        l.set_column(k, &u.column(i));
        r.set_column(k, &v.column(i));
        q[k] = s[i].ln();
    }

    for k in 0..n.saturating_sub(1) {
        if leading_sign(&l, k) < 0.0 {
            flip_pair(&mut l, &mut r, k);
        }
    }
    if l.determinant() < 0.0 {
        flip_pair(&mut l, &mut r, n - 1);
    }

    let scale = q.iter().fold(0.0_f64, |m, v| m.max(v.abs())) + 1.0;
    let degenerate = (1..n).any(|k| q[k] - q[k - 1] <= DEGENERACY_TOL * scale);
    Ok(TwoPolarForm { l, q, r, degenerate })
}

fn leading_sign(m: &Mat, col: usize) -> f64 {
    let c = m.column(col);
    let tol = 1e-12 * c.amax().max(1e-300);
    c.iter().find(|v| v.abs() > tol).map(|v| v.signum()).unwrap_or(1.0)
}

fn flip_pair(l: &mut Mat, r: &mut Mat, k: usize) {
    l.column_mut(k).neg_mut();
    r.column_mut(k).neg_mut();
}
