use std::f64::consts::SQRT_2;

use crate::error::{Error, Result};
use crate::geometry::{deformation_invariants, two_polar_decompose, MetricPair};
use crate::linalg::{try_inverse, Mat, Vector};

/// Doubly isotropic potentials, i.e. functions of the invariants `q^a` only.
///
/// Two-dimensional presets use `Q^a = e^{q^a}` with `q¹ ≤ q²`,
/// `Q± = (Q¹ ± Q²)/√2` and the polar pair `Q⁺ = r cos φ`, `Q⁻ = r sin φ`.
#[derive(Debug, Clone, PartialEq)]
pub enum Potential {
    None,
    /// `κ q̄² / 2`
    DilatationHarmonic {
        kappa: f64,
    },
    /// `Σ_{i≠j} (k_ij / 2)(q^i − q^j)²`
    BinaryShear {
        stiffness: Mat,
    },
    /// `κ (1/(Q¹Q²) + ((Q¹)² + (Q²)²)/2)`
    TwoDimPreset {
        kappa: f64,
    },
    /// `2κ/(r² cos 2φ) + κ r²/2`, the polar form of the previous preset.
    PolarTrig {
        kappa: f64,
    },
    /// `a/(Q⁺)² + b/(Q⁻)² + c((Q⁺)² + (Q⁻)²)`
    QpmFamily {
        a: f64,
        b: f64,
        c: f64,
    },
    Sum(Vec<Potential>),
}

impl Potential {
    pub fn validate(&self, n: usize) -> Result<()> {
        let finite = |vals: &[f64]| {
            if vals.iter().all(|v| v.is_finite()) {
                Ok(())
            } else {
                Err(Error::InvalidArgument("potential parameters must be finite".into()))
            }
        };
        let planar = |name: &str| {
            if n == 2 {
                Ok(())
            } else {
                Err(Error::InvalidArgument(format!(
                    "{name} potential is defined for n = 2 only"
                )))
            }
        };
        match self {
            Potential::None => Ok(()),
            Potential::DilatationHarmonic { kappa } => finite(&[*kappa]),
            Potential::BinaryShear { stiffness } => {
                if stiffness.shape() != (n, n) {
                    return Err(Error::InvalidArgument(format!(
                        "binary stiffness table must be {n}×{n}, got {:?}",
                        stiffness.shape()
                    )));
                }
                finite(stiffness.as_slice())
            }
            Potential::TwoDimPreset { kappa } | Potential::PolarTrig { kappa } => {
                planar("two-dimensional preset")?;
                finite(&[*kappa])
            }
            Potential::QpmFamily { a, b, c } => {
                planar("Q±")?;
                finite(&[*a, *b, *c])
            }
            Potential::Sum(parts) => parts.iter().try_for_each(|p| p.validate(n)),
        }
    }

    /// True when the value depends on `q̄` alone.
    pub fn depends_on_qbar_only(&self) -> bool {
        match self {
            Potential::None | Potential::DilatationHarmonic { .. } => true,
            Potential::Sum(parts) => parts.iter().all(Potential::depends_on_qbar_only),
            _ => false,
        }
    }

    pub fn value_q(&self, q: &Vector) -> f64 {
        let n = q.len();
        match self {
            Potential::None => 0.0,
            Potential::DilatationHarmonic { kappa } => {
                let qbar = q.sum() / n as f64;
                0.5 * kappa * qbar * qbar
            }
            Potential::BinaryShear { stiffness } => {
                let mut v = 0.0;
                for i in 0..n {
                    for j in 0..n {
                        if i != j {
                            v += 0.5 * stiffness[(i, j)] * (q[i] - q[j]).powi(2);
                        }
                    }
                }
                v
            }
            Potential::TwoDimPreset { kappa } => {
                let (q1, q2) = (q[0].exp(), q[1].exp());
                kappa * (1.0 / (q1 * q2) + 0.5 * (q1 * q1 + q2 * q2))
            }
            Potential::PolarTrig { kappa } => {
                let (r, phi) = polar_of(q);
                2.0 * kappa / (r * r * (2.0 * phi).cos()) + 0.5 * kappa * r * r
            }
            Potential::QpmFamily { a, b, c } => {
                let (qp, qm) = qpm_of(q);
                a / (qp * qp) + b / (qm * qm) + c * (qp * qp + qm * qm)
            }
            Potential::Sum(parts) => parts.iter().map(|p| p.value_q(q)).sum(),
        }
    }

    /// Analytic `∂V/∂q^a`.
    pub fn grad_q(&self, q: &Vector) -> Vector {
        let n = q.len();
        match self {
            Potential::None => Vector::zeros(n),
            Potential::DilatationHarmonic { kappa } => {
                let qbar = q.sum() / n as f64;
                Vector::from_element(n, kappa * qbar / n as f64)
            }
            Potential::BinaryShear { stiffness } => Vector::from_fn(n, |a, _| {
                let mut g = 0.0;
                for b in 0..n {
                    if a != b {
                        g += (stiffness[(a, b)] + stiffness[(b, a)]) * (q[a] - q[b]);
                    }
                }
                g
            }),
            Potential::TwoDimPreset { kappa } => {
                let (q1, q2) = (q[0].exp(), q[1].exp());
                let inv = 1.0 / (q1 * q2);
                Vector::from_vec(vec![kappa * (q1 * q1 - inv), kappa * (q2 * q2 - inv)])
            }
            Potential::PolarTrig { kappa } => {
                let (r, phi) = polar_of(q);
                let c2 = (2.0 * phi).cos();
                let dv_dr = -4.0 * kappa / (r * r * r * c2) + kappa * r;
                let dv_dphi = 4.0 * kappa * (2.0 * phi).sin() / (r * r * c2 * c2);
                let (cp, sp) = (phi.cos(), phi.sin());
                let dv_dqp = dv_dr * cp - dv_dphi * sp / r;
                let dv_dqm = dv_dr * sp + dv_dphi * cp / r;
                chain_qpm(q, dv_dqp, dv_dqm)
            }
            Potential::QpmFamily { a, b, c } => {
                let (qp, qm) = qpm_of(q);
                let dv_dqp = -2.0 * a / (qp * qp * qp) + 2.0 * c * qp;
                let dv_dqm = -2.0 * b / (qm * qm * qm) + 2.0 * c * qm;
                chain_qpm(q, dv_dqp, dv_dqm)
            }
            Potential::Sum(parts) => parts.iter().fold(Vector::zeros(n), |acc, p| acc + p.grad_q(q)),
        }
    }

    pub fn value(&self, phi: &Mat, metrics: &MetricPair) -> Result<f64> {
        if matches!(self, Potential::None) {
            return Ok(0.0);
        }
        Ok(self.value_q(&deformation_invariants(phi, metrics)?))
    }

    /// Covector `F` with `dV = Tr(F dφ)`.
    pub fn gradient_phi(&self, phi: &Mat, metrics: &MetricPair) -> Result<Mat> {
        let n = phi.nrows();
        match self {
            Potential::None => Ok(Mat::zeros(n, n)),
            // q̄ = ln det φ / n + const, so dq̄ = Tr(φ⁻¹ dφ)/n.
            Potential::DilatationHarmonic { kappa } => {
                let q = deformation_invariants(phi, metrics)?;
                let qbar = q.sum() / n as f64;
                Ok(try_inverse(phi)? * (kappa * qbar / n as f64))
            }
            Potential::Sum(parts) => parts
                .iter()
                .try_fold(Mat::zeros(n, n), |acc, p| Ok(acc + p.gradient_phi(phi, metrics)?)),
            _ => {
                let tp = two_polar_decompose(&metrics.to_euclidean_chart(phi))?;
                let dv = self.grad_q(&tp.q);
                let stretches = tp.stretches();
                let diag = Vector::from_fn(n, |a, _| dv[a] / stretches[a]);
                let f_chart = &tp.r * Mat::from_diagonal(&diag) * tp.l.transpose();
                Ok(metrics.covector_from_euclidean_chart(&f_chart))
            }
        }
    }
}

fn qpm_of(q: &Vector) -> (f64, f64) {
    let (q1, q2) = (q[0].exp(), q[1].exp());
    ((q1 + q2) / SQRT_2, (q1 - q2) / SQRT_2)
}

fn polar_of(q: &Vector) -> (f64, f64) {
    let (qp, qm) = qpm_of(q);
    (qp.hypot(qm), qm.atan2(qp))
}

/// `∂V/∂q^a = Q^a ∂V/∂Q^a` from derivatives in `Q±`.
fn chain_qpm(q: &Vector, dv_dqp: f64, dv_dqm: f64) -> Vector {
    let (q1, q2) = (q[0].exp(), q[1].exp());
    Vector::from_vec(vec![q1 * (dv_dqp + dv_dqm) / SQRT_2, q2 * (dv_dqp - dv_dqm) / SQRT_2])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd_grad(p: &Potential, q: &Vector) -> Vector {
        Vector::from_fn(q.len(), |a, _| {
            let h = 1e-6;
            let mut qp = q.clone();
            let mut qm = q.clone();
            qp[a] += h;
            qm[a] -= h;
            (p.value_q(&qp) - p.value_q(&qm)) / (2.0 * h)
        })
    }

    #[test]
    fn presets_coincide() {
        for q in [[-0.3, 0.2], [0.1, 0.4], [-1.0, -0.2]] {
            let q = Vector::from_vec(q.to_vec());
            let a = Potential::TwoDimPreset { kappa: 0.7 }.value_q(&q);
            let b = Potential::PolarTrig { kappa: 0.7 }.value_q(&q);
            assert!((a - b).abs() < 1e-12 * a.abs());
        }
    }

    #[test]
    fn qpm_in_individual_stretches() {
        let q = Vector::from_vec(vec![-0.3, 0.5]);
        let (q1, q2) = (q[0].exp(), q[1].exp());
        let (a, b, c) = (0.4, 0.9, 1.3);
        let direct = 2.0 * a / (q1 + q2).powi(2) + 2.0 * b / (q1 - q2).powi(2) + c * (q1 * q1 + q2 * q2);
        let v = Potential::QpmFamily { a, b, c }.value_q(&q);
        assert!((v - direct).abs() < 1e-12 * direct);
    }

    #[test]
    fn analytic_gradients_match_differences() {
        let q2 = Vector::from_vec(vec![-0.3, 0.45]);
        let q3 = Vector::from_vec(vec![-0.3, 0.1, 0.45]);
        let table = Mat::from_row_slice(3, 3, &[0.0, 1.0, 0.5, 0.2, 0.0, 0.7, 0.3, 0.1, 0.0]);
        let cases = [
            (Potential::DilatationHarmonic { kappa: 1.3 }, &q3),
            (Potential::BinaryShear { stiffness: table }, &q3),
            (Potential::TwoDimPreset { kappa: 0.8 }, &q2),
            (Potential::PolarTrig { kappa: 0.8 }, &q2),
            (Potential::QpmFamily { a: 0.4, b: 0.9, c: 1.3 }, &q2),
        ];
        for (p, q) in cases {
            let diff = (p.grad_q(q) - fd_grad(&p, q)).amax();
            assert!(diff < 1e-7, "{p:?}: {diff}");
        }
    }

    #[test]
    fn phi_gradient_matches_differences() {
        let g = Mat::from_row_slice(2, 2, &[2.0, 0.3, 0.3, 1.0]);
        let eta = Mat::from_row_slice(2, 2, &[1.5, -0.2, -0.2, 0.7]);
        let metrics = MetricPair::new(g, eta).unwrap();
        let phi = Mat::from_row_slice(2, 2, &[1.1, 0.4, -0.3, 0.9]);
        for p in [
            Potential::DilatationHarmonic { kappa: 1.3 },
            Potential::QpmFamily { a: 0.4, b: 0.9, c: 1.3 },
            Potential::Sum(vec![
                Potential::TwoDimPreset { kappa: 0.5 },
                Potential::DilatationHarmonic { kappa: 0.2 },
            ]),
        ] {
            let f = p.gradient_phi(&phi, &metrics).unwrap();
            for i in 0..2 {
                for a in 0..2 {
                    let h = 1e-6;
                    let mut pp = phi.clone();
                    let mut pm = phi.clone();
                    pp[(i, a)] += h;
                    pm[(i, a)] -= h;
                    let d = (p.value(&pp, &metrics).unwrap() - p.value(&pm, &metrics).unwrap()) / (2.0 * h);
                    assert!((d - f[(a, i)]).abs() < 1e-7, "{p:?} ({i},{a})");
                }
            }
        }
    }

    #[test]
    fn planar_presets_rejected_in_three_dimensions() {
        assert!(Potential::QpmFamily { a: 1.0, b: 1.0, c: 1.0 }.validate(3).is_err());
        assert!(Potential::DilatationHarmonic { kappa: 1.0 }.validate(3).is_ok());
    }
}
