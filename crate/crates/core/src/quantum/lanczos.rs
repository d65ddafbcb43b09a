use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{symmetric_eigen_ascending, Mat};

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Lowest `k` distinct eigenvalues of a Hermitian operator by Lanczos with
/// full reorthogonalization. Multiplicities are not resolved.
///
/// A Ritz value counts as converged when its residual `|β_m y_m|` is at most
/// `tol · max(1, |θ|)`.
pub fn lanczos_lowest<F>(dim: usize, apply: F, k: usize, tol: f64, max_iter: usize) -> Result<Vec<f64>>
where
    F: Fn(&[Complex64]) -> Vec<Complex64>,
{
    if dim == 0 {
        return Err(Error::DomainError("operator has no active unknowns".into()));
    }
    let k = k.min(dim);
    let mut v: Vec<Complex64> = (0..dim)
        .map(|i| {
            let t = i as f64;
            Complex64::new(1.0 + 0.3 * (0.7 * t).sin(), 0.2 * (1.3 * t).cos())
        })
        .collect();
    let n0 = norm(&v);
    v.iter_mut().for_each(|z| *z /= n0);

    let mut basis: Vec<Vec<Complex64>> = vec![v];
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let limit = max_iter.min(dim);
    loop {
        let j = alpha.len();
        let mut w = apply(&basis[j]);
        let a = dot(&basis[j], &w).re;
        alpha.push(a);
        for _ in 0..2 {
            for b in &basis {
                let c = dot(b, &w);
                w.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
        }
        let b = norm(&w);
        let m = alpha.len();
        let done = b <= 1e-13 * a.abs().max(1.0) || m >= limit;
        if m.is_multiple_of(5) || done {
            let mut t = Mat::zeros(m, m);
            for i in 0..m {
                t[(i, i)] = alpha[i];
                if i + 1 < m {
                    t[(i, i + 1)] = beta[i];
                    t[(i + 1, i)] = beta[i];
                }
            }
            let (vals, vecs) = symmetric_eigen_ascending(&t);
            let ok = m >= k && (0..k).all(|i| (b * vecs[(m - 1, i)]).abs() <= tol * vals[i].abs().max(1.0));
            if ok || b <= 1e-13 * a.abs().max(1.0) {
                return Ok(vals.iter().take(k).copied().collect());
            }
            if m >= limit {
                return Err(Error::Unconverged(format!("Lanczos stopped after {m} iterations")));
            }
        }
        beta.push(b);
        basis.push(w.into_iter().map(|z| z / b).collect());
    }
}
