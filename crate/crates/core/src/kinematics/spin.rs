use crate::error::Result;
use crate::geometry::MetricPair;
use crate::kinematics::PhasePoint;
use crate::linalg::{matrix_power, metric_transpose, Mat};

/// Affine spin in both representations with its skew parts.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinVorticity {
    /// `Σ = φP`
    pub sigma: Mat,
    /// `Σ̂ = Pφ`
    pub sigma_hat: Mat,
    /// `S = Σ − g⁻¹Σᵀg`
    pub s: Mat,
    /// `V = Σ̂ − η⁻¹Σ̂ᵀη`
    pub v: Mat,
    /// Dilatational momentum `Tr Σ = Tr Σ̂`.
    pub p: f64,
}

pub fn spin_vorticity(point: &PhasePoint, metrics: &MetricPair) -> Result<SpinVorticity> {
    let det = point.phi.determinant();
    if det == 0.0 || !det.is_finite() {
        return Err(crate::Error::SingularConfiguration { det });
    }
    let sigma = &point.phi * &point.pi;
    let sigma_hat = &point.pi * &point.phi;
    let s = &sigma - metric_transpose(&sigma, metrics.g(), metrics.g_inv());
    let v = &sigma_hat - metric_transpose(&sigma_hat, metrics.eta(), metrics.eta_inv());
    let p = sigma.trace();
    Ok(SpinVorticity {
        sigma,
        sigma_hat,
        s,
        v,
        p,
    })
}

/// `Σ = σ + (p/n) I` with `σ` traceless.
pub fn trace_split(sigma: &Mat) -> (Mat, f64) {
    let n = sigma.nrows();
    let p = sigma.trace();
    (sigma - Mat::identity(n, n) * (p / n as f64), p)
}

/// `C(k) = Tr(Σ̂ᵏ)`.
pub fn casimir(sigma_hat: &Mat, k: u32) -> f64 {
    matrix_power(sigma_hat, k).trace()
}

/// `‖X‖² = −½ Tr(X²)` for a skew generator.
pub fn skew_norm_sq(x: &Mat) -> f64 {
    -0.5 * (x * x).trace()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs;

    #[test]
    fn inverse_momentum_has_no_spin() {
        let phi = Mat::from_row_slice(2, 2, &[1.3, 0.2, -0.1, 0.8]);
        let pt = PhasePoint::internal(phi.clone(), phi.try_inverse().unwrap()).unwrap();
        let sv = spin_vorticity(&pt, &MetricPair::euclidean(2)).unwrap();
        assert!(max_abs(&sv.s) < 1e-14);
        assert!((sv.p - 2.0).abs() < 1e-14);
    }

    #[test]
    fn antisymmetric_momentum_at_identity() {
        let w = Mat::from_row_slice(3, 3, &[0.0, 0.3, -0.2, -0.3, 0.0, 0.5, 0.2, -0.5, 0.0]);
        let pt = PhasePoint::internal(Mat::identity(3, 3), w.clone()).unwrap();
        let sv = spin_vorticity(&pt, &MetricPair::euclidean(3)).unwrap();
        assert_eq!(sv.sigma, w);
        assert_eq!(sv.sigma_hat, w);
        assert!(max_abs(&(sv.s - &w * 2.0)) < 1e-15);
        assert!(max_abs(&(sv.v - &w * 2.0)) < 1e-15);
    }

    #[test]
    fn skewness_in_general_metrics() {
        let g = Mat::from_row_slice(2, 2, &[2.0, 0.3, 0.3, 1.0]);
        let eta = Mat::from_row_slice(2, 2, &[1.5, -0.2, -0.2, 0.7]);
        let m = MetricPair::new(g.clone(), eta.clone()).unwrap();
        let pt = PhasePoint::internal(
            Mat::from_row_slice(2, 2, &[1.1, 0.4, -0.3, 0.9]),
            Mat::from_row_slice(2, 2, &[0.2, -0.7, 0.4, 1.3]),
        )
        .unwrap();
        let sv = spin_vorticity(&pt, &m).unwrap();
        let gs = &g * &sv.s;
        assert!(max_abs(&(&gs + gs.transpose())) < 1e-14);
        let ev = &eta * &sv.v;
        assert!(max_abs(&(&ev + ev.transpose())) < 1e-14);
        assert!((sv.sigma.trace() - sv.sigma_hat.trace()).abs() < 1e-14);
    }

    #[test]
    fn trace_split_cases() {
        let (s, p) = trace_split(&Mat::identity(3, 3));
        assert!(max_abs(&s) < 1e-15 && p == 3.0);
        let t = Mat::from_row_slice(2, 2, &[1.0, 2.0, 3.0, -1.0]);
        let (s, p) = trace_split(&t);
        assert_eq!((s, p), (t, 0.0));
    }

    #[test]
    fn casimir_cases() {
        assert_eq!(casimir(&Mat::zeros(3, 3), 2), 0.0);
        let d = Mat::from_row_slice(2, 2, &[1.5, 0.0, 0.0, -2.0]);
        assert!((casimir(&d, 2) - (2.25 + 4.0)).abs() < 1e-15);
    }
}
