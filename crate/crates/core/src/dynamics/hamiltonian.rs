use crate::dynamics::{kinetic_hamiltonian, InertiaModel, Potential};
use crate::error::{Error, Result};
use crate::geometry::MetricPair;
use crate::kinematics::{PhasePoint, PhaseTangent};
use crate::linalg::{metric_transpose, try_inverse, Mat};

/// Model, potential and metrics bundled as one Hamiltonian `H = 𝒯 + V`.
#[derive(Debug, Clone, PartialEq)]
pub struct System {
    pub model: InertiaModel,
    pub potential: Potential,
    pub metrics: MetricPair,
}

impl System {
    pub fn new(model: InertiaModel, potential: Potential, metrics: MetricPair) -> Result<Self> {
        let n = metrics.dim();
        model.validate(n)?;
        potential.validate(n)?;
        Ok(Self {
            model,
            potential,
            metrics,
        })
    }

    pub fn dim(&self) -> usize {
        self.metrics.dim()
    }

    pub fn energy(&self, point: &PhasePoint) -> Result<f64> {
        Ok(
            kinetic_hamiltonian(&self.model, &self.metrics, point)?
                + self.potential.value(&point.phi, &self.metrics)?,
        )
    }

    pub fn rhs(&self, point: &PhasePoint) -> Result<PhaseTangent> {
        hamilton_rhs(&self.model, &self.potential, &self.metrics, point)
    }
}

/// `d𝒯 = Tr(G dΣ̂)` for the invariant models written through `Σ̂`
/// (or through `Σ` for the metric-affine model).
fn invariant_gradient(model: &InertiaModel, metrics: &MetricPair, sigma: &Mat) -> Mat {
    let n = sigma.nrows();
    let c = model.casimir_coefficients(n).expect("invariant model");
    let (k, k_inv) = match model {
        InertiaModel::MetricAffine { .. } => (metrics.g(), metrics.g_inv()),
        _ => (metrics.eta(), metrics.eta_inv()),
    };
    // ‖skew‖² = Tr(Σ k⁻¹Σᵀ k) − Tr(Σ²), whose gradient is k⁻¹Σᵀk − Σ.
    sigma * (c.inv_alpha - c.inv_mu)
        + metric_transpose(sigma, k, k_inv) * c.inv_mu
        + Mat::identity(n, n) * (c.inv_beta * sigma.trace())
}

/// Canonical equations `ż = {z, H}` from analytic gradients.
pub fn hamilton_rhs(
    model: &InertiaModel,
    potential: &Potential,
    metrics: &MetricPair,
    point: &PhasePoint,
) -> Result<PhaseTangent> {
    let n = point.dim();
    let m = model.mass();
    let phi = &point.phi;
    let pi = &point.pi;

    let (xdot, mut pidot) = if model.affine_translation() {
        // 𝒯_tr = pᵀφη⁻¹φᵀp / 2m
        let eta_inv_phit_p = metrics.eta_inv() * phi.transpose() * &point.p;
        let xdot = phi * &eta_inv_phit_p / m;
        let force = &eta_inv_phit_p * point.p.transpose() / m;
        (xdot, -force)
    } else {
        (metrics.g_inv() * &point.p / m, Mat::zeros(n, n))
    };

    let phidot = match model {
        InertiaModel::DAlembert { j, .. } => metrics.g_inv() * pi.transpose() * try_inverse(j)?,
        InertiaModel::AffineAffine { .. } | InertiaModel::AffineMetric { .. } => {
            let g = invariant_gradient(model, metrics, &(pi * phi));
            pidot -= &g * pi;
            phi * g
        }
        InertiaModel::MetricAffine { .. } => {
            let g = invariant_gradient(model, metrics, &(phi * pi));
            pidot -= pi * &g;
            g * phi
        }
    };
    pidot -= potential.gradient_phi(phi, metrics)?;

    let tangent = PhaseTangent {
        xdot,
        phidot,
        pdot: crate::linalg::Vector::zeros(n),
        pidot,
    };
    if tangent.pack().iter().any(|v| !v.is_finite()) {
        return Err(Error::NumericalFailure("non-finite Hamiltonian vector field".into()));
    }
    Ok(tangent)
}
