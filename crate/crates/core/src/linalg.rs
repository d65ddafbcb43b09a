//! Small dense-matrix helpers shared across modules.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

pub type Mat = DMatrix<f64>;
pub type Vector = DVector<f64>;

pub fn identity(n: usize) -> Mat {
    Mat::identity(n, n)
}

pub fn frobenius(m: &Mat) -> f64 {
    m.iter().map(|v| v * v).sum::<f64>().sqrt()
}

pub fn max_abs(m: &Mat) -> f64 {
    m.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

pub fn is_symmetric(m: &Mat, tol: f64) -> bool {
    m.is_square() && max_abs(&(m - m.transpose())) <= tol
}

/// Inverse that reports singular input with its determinant.
pub fn try_inverse(m: &Mat) -> Result<Mat> {
    let det = m.determinant();
    if !det.is_finite() || det == 0.0 {
        return Err(Error::SingularConfiguration { det });
    }
    m.clone().try_inverse().ok_or(Error::SingularConfiguration { det })
}

/// Metric adjoint `k⁻¹ Xᵀ k` of `x` with respect to the bilinear form `k`.
pub fn metric_transpose(x: &Mat, k: &Mat, k_inv: &Mat) -> Mat {
    k_inv * x.transpose() * k
}

/// Eigen-decomposition of a symmetric matrix with ascending eigenvalues.
pub fn symmetric_eigen_ascending(m: &Mat) -> (Vector, Mat) {
    let n = m.nrows();
    let eig = nalgebra::SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = Vector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
    let mut vectors = Mat::zeros(n, n);
    for (k, &i) in order.iter().enumerate() {
        vectors.set_column(k, &eig.eigenvectors.column(i));
    }
    (values, vectors)
}

/// One-sided Jacobi SVD `m = U diag(s) Vᵀ` for small square matrices.
///
/// nalgebra's bidiagonal SVD reconstructs only to ~1e-9 on moderately
/// conditioned inputs; the rotations here keep `U`, `V` orthogonal and the
/// product exact to a few ulps.
pub fn jacobi_svd(m: &Mat) -> Result<(Mat, Vector, Mat)> {
    let n = m.ncols();
    if m.nrows() != n {
        return Err(Error::ShapeError(format!(
            "expected square matrix, got {:?}",
            m.shape()
        )));
    }
    let mut w = m.clone();
    let mut v = identity(n);
    for _ in 0..60 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = w.column(p).norm_squared();
                let beta = w.column(q).norm_squared();
                let gamma = w.column(p).dot(&w.column(q));
                if gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() || gamma == 0.0 {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for mat in [&mut w, &mut v] {
                    for i in 0..n {
                        let (x, y) = (mat[(i, p)], mat[(i, q)]);
                        mat[(i, p)] = c * x - s * y;
                        mat[(i, q)] = s * x + c * y;
                    }
                }
            }
        }
        if !rotated {
            let s = Vector::from_fn(n, |k, _| w.column(k).norm());
            if s.iter().any(|x| *x == 0.0 || !x.is_finite()) {
                return Err(Error::NumericalFailure("singular or non-finite matrix in SVD".into()));
            }
            let u = Mat::from_fn(n, n, |i, k| w[(i, k)] / s[k]);
            return Ok((u, s, v));
        }
    }
    Err(Error::NumericalFailure(
        "Jacobi SVD did not converge in 60 sweeps".into(),
    ))
}

/// Integer power by repeated multiplication; `k = 0` yields the identity.
pub fn matrix_power(m: &Mat, k: u32) -> Mat {
    let mut out = identity(m.nrows());
    for _ in 0..k {
        out = &out * m;
    }
    out
}

pub fn all_finite(m: &Mat) -> bool {
    m.iter().all(|v| v.is_finite())
}

/// 2×2 rotation by `theta`.
pub fn rotation2(theta: f64) -> Mat {
    let (s, c) = theta.sin_cos();
    Mat::from_row_slice(2, 2, &[c, -s, s, c])
}
