//! Incompressible shear sector of planar (n = 2) invariant models.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kinematics::{sigma_hat_from_two_polar, PhasePoint};
use crate::linalg::{rotation2, Mat, Vector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundedness {
    Bounded,
    Unbounded,
    Marginal,
}

/// Shear motion is bounded exactly when `p_α` and `p_β` share a sign.
pub fn classify_2d(p_alpha: f64, p_beta: f64) -> Boundedness {
    let s = p_alpha * p_beta;
    if s > 0.0 {
        Boundedness::Bounded
    } else if s < 0.0 {
        Boundedness::Unbounded
    } else {
        Boundedness::Marginal
    }
}

/// Reduced shear Hamiltonian in `x = q² − q¹` with `p_x = (p₂ − p₁)/2`:
/// `p_x²/α + V_eff(x)`, where `α` is `A` (or `I + A` for the mixed models).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShearHamiltonian {
    pub alpha: f64,
    pub p_alpha: f64,
    pub p_beta: f64,
}

impl ShearHamiltonian {
    /// `𝗆²/(16α sh²(x/2)) − 𝗇²/(16α ch²(x/2))`, `𝗆 = p_β − p_α`, `𝗇 = p_β + p_α`.
    pub fn effective_potential(&self, x: f64) -> f64 {
        let m = self.p_beta - self.p_alpha;
        let n = self.p_beta + self.p_alpha;
        let h = 0.5 * x;
        m * m / (16.0 * self.alpha * h.sinh().powi(2)) - n * n / (16.0 * self.alpha * h.cosh().powi(2))
    }

    pub fn energy(&self, x: f64, p_x: f64) -> f64 {
        p_x * p_x / self.alpha + self.effective_potential(x)
    }

    /// Outer turning point `x > x0` with `V_eff(x) = E`, or `None` when the
    /// level stays above the potential out to `x_cap`.
    pub fn outer_turning_point(&self, energy: f64, x0: f64, x_cap: f64) -> Option<f64> {
        let f = |x: f64| self.effective_potential(x) - energy;
        if f(x_cap) < 0.0 {
            return None;
        }
        let (mut lo, mut hi) = (x0, x_cap);
        if f(lo) > 0.0 {
            return Some(lo);
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some(hi)
    }
}

/// Planar phase point with invariants `q̄ ∓ x/2`, frames `L = Rot(θ_L)`,
/// `R = Rot(θ_R)`, and prescribed `(p_x, p, p_α, p_β)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarState {
    pub qbar: f64,
    pub x: f64,
    pub theta_l: f64,
    pub theta_r: f64,
    pub p_x: f64,
    pub p_dil: f64,
    pub p_alpha: f64,
    pub p_beta: f64,
}

impl PlanarState {
    pub fn to_phase_point(&self) -> Result<PhasePoint> {
        if self.x <= 0.0 {
            return Err(Error::DomainError("planar state needs x > 0".into()));
        }
        let q = Vector::from_vec(vec![self.qbar - 0.5 * self.x, self.qbar + 0.5 * self.x]);
        let l = rotation2(self.theta_l);
        let r = rotation2(self.theta_r);
        let phi = &l * Mat::from_diagonal(&q.map(f64::exp)) * r.transpose();
        let p_a = Vector::from_vec(vec![0.5 * self.p_dil - self.p_x, 0.5 * self.p_dil + self.p_x]);
        let mm = self.p_beta - self.p_alpha;
        let nn = self.p_beta + self.p_alpha;
        let m = Mat::from_row_slice(2, 2, &[0.0, mm, -mm, 0.0]);
        let n = Mat::from_row_slice(2, 2, &[0.0, nn, -nn, 0.0]);
        let sigma_hat = sigma_hat_from_two_polar(&q, &r, &p_a, &m, &n)?;
        let phi_inv = phi.clone().try_inverse().expect("diagonal stretch is invertible");
        PhasePoint::internal(phi, sigma_hat * phi_inv)
    }
}
