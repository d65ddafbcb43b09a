use serde::{Deserialize, Serialize};

use crate::dynamics::{InertiaModel, System};
use crate::error::Error;
use crate::kinematics::PhasePoint;
use crate::linalg::{frobenius, metric_transpose, Mat};

const BLOWUP: f64 = 1e100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    Rk4,
    ImplicitMidpoint,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrationOptions {
    pub dt: f64,
    pub steps: usize,
    /// Keep every k-th state (the final state is always kept).
    pub record_every: usize,
    /// Fixed-point tolerance of the implicit midpoint step, relative to `1 + max|z|`.
    pub tol: f64,
    pub max_iter: usize,
}

impl IntegrationOptions {
    pub fn new(dt: f64, steps: usize) -> Self {
        Self {
            dt,
            steps,
            record_every: 1,
            tol: 1e-12,
            max_iter: 50,
        }
    }

    pub fn record_every(mut self, k: usize) -> Self {
        self.record_every = k.max(1);
        self
    }
}

/// Largest deviations of the conserved quantities from their initial values.
///
/// Matrix drifts are Frobenius norms divided by `max(1, ‖initial‖)`; the
/// energy drift is relative to `|H₀|` (absolute when `H₀ = 0`).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ConservationReport {
    pub initial_energy: f64,
    pub energy_drift: f64,
    /// Total spatial spin, orbital part `x pᵀ` included.
    pub spin_drift: Option<f64>,
    pub vorticity_drift: Option<f64>,
    /// Traceless part of the spin conserved by the model's affine symmetry.
    pub deviator_drift: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<PhasePoint>,
    pub audit: ConservationReport,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum IntegrationError {
    #[error("integration diverged at step {step}: {reason}")]
    Diverged {
        step: usize,
        reason: String,
        partial: Box<Trajectory>,
    },
    #[error(transparent)]
    Failed(#[from] Error),
}

struct Invariants {
    energy: f64,
    spin: Mat,
    vorticity: Mat,
    deviator: Option<Mat>,
}

fn invariants(system: &System, z: &PhasePoint) -> Result<Invariants, Error> {
    let n = z.dim();
    let metrics = &system.metrics;
    let total = &z.x * z.p.transpose() + &z.phi * &z.pi;
    let sigma_hat = &z.pi * &z.phi;
    let spin = &total - metric_transpose(&total, metrics.g(), metrics.g_inv());
    let vorticity = &sigma_hat - metric_transpose(&sigma_hat, metrics.eta(), metrics.eta_inv());
    let deviator = if system.potential.depends_on_qbar_only() {
        let src = match system.model {
            InertiaModel::DAlembert { .. } => None,
            InertiaModel::MetricAffine { .. } => Some(sigma_hat),
            _ => Some(total),
        };
        src.map(|s| {
            let tr = s.trace() / n as f64;
            s - Mat::identity(n, n) * tr
        })
    } else {
        None
    };
    Ok(Invariants {
        energy: system.energy(z)?,
        spin,
        vorticity,
        deviator,
    })
}

struct Monitor {
    first: Invariants,
    report: ConservationReport,
}

impl Monitor {
    fn new(system: &System, z: &PhasePoint) -> Result<Self, Error> {
        let first = invariants(system, z)?;
        let report = ConservationReport {
            initial_energy: first.energy,
            energy_drift: 0.0,
            spin_drift: Some(0.0),
            vorticity_drift: Some(0.0),
            deviator_drift: first.deviator.as_ref().map(|_| 0.0),
        };
        Ok(Self { first, report })
    }

    fn observe(&mut self, system: &System, z: &PhasePoint) -> Result<(), Error> {
        let now = invariants(system, z)?;
        let rel = |a: &Mat, b: &Mat| frobenius(&(a - b)) / frobenius(b).max(1.0);
        let e0 = self.first.energy.abs();
        let de = (now.energy - self.first.energy).abs() / if e0 > 0.0 { e0 } else { 1.0 };
        let r = &mut self.report;
        r.energy_drift = r.energy_drift.max(de);
        r.spin_drift = r.spin_drift.map(|d| d.max(rel(&now.spin, &self.first.spin)));
        r.vorticity_drift = r
            .vorticity_drift
            .map(|d| d.max(rel(&now.vorticity, &self.first.vorticity)));
        if let (Some(d), Some(a), Some(b)) = (r.deviator_drift, &now.deviator, &self.first.deviator) {
            r.deviator_drift = Some(d.max(rel(a, b)));
        }
        Ok(())
    }
}

fn field(system: &System, n: usize, z: &[f64]) -> Result<Vec<f64>, Error> {
    Ok(system.rhs(&PhasePoint::unpack(n, z))?.pack())
}

fn axpy(z: &[f64], h: f64, k: &[f64]) -> Vec<f64> {
    z.iter().zip(k).map(|(a, b)| a + h * b).collect()
}

fn rk4_step(system: &System, n: usize, z: &[f64], dt: f64) -> Result<Vec<f64>, Error> {
    let k1 = field(system, n, z)?;
    let k2 = field(system, n, &axpy(z, 0.5 * dt, &k1))?;
    let k3 = field(system, n, &axpy(z, 0.5 * dt, &k2))?;
    let k4 = field(system, n, &axpy(z, dt, &k3))?;
    Ok((0..z.len())
        .map(|i| z[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect())
}

/// One implicit midpoint step by fixed-point iteration; `Ok(None)` if it
/// failed to converge.
fn midpoint_step(system: &System, n: usize, z: &[f64], opts: &IntegrationOptions) -> Result<Option<Vec<f64>>, Error> {
    let mut next = axpy(z, opts.dt, &field(system, n, z)?);
    for _ in 0..opts.max_iter {
        let mid: Vec<f64> = z.iter().zip(&next).map(|(a, b)| 0.5 * (a + b)).collect();
        let update = axpy(z, opts.dt, &field(system, n, &mid)?);
        let scale = 1.0 + update.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let change = update.iter().zip(&next).fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
        next = update;
        if change <= opts.tol * scale {
            return Ok(Some(next));
        }
    }
    Ok(None)
}

pub fn integrate(
    system: &System,
    initial: &PhasePoint,
    scheme: Scheme,
    dt: f64,
    steps: usize,
) -> Result<Trajectory, IntegrationError> {
    integrate_with(system, initial, scheme, &IntegrationOptions::new(dt, steps))
}

pub fn integrate_with(
    system: &System,
    initial: &PhasePoint,
    scheme: Scheme,
    opts: &IntegrationOptions,
) -> Result<Trajectory, IntegrationError> {
    if !(opts.dt > 0.0 && opts.dt.is_finite()) {
        return Err(Error::InvalidArgument(format!("dt must be positive, got {}", opts.dt)).into());
    }
    let n = initial.dim();
    if system.dim() != n {
        return Err(Error::ShapeError(format!(
            "system of dimension {} with point of dimension {n}",
            system.dim()
        ))
        .into());
    }
    let mut monitor = Monitor::new(system, initial)?;
    let mut times = vec![0.0];
    let mut states = vec![initial.clone()];
    let mut z = initial.pack();

    for step in 1..=opts.steps {
        let next = match scheme {
            Scheme::Rk4 => Some(rk4_step(system, n, &z, opts.dt)),
            Scheme::ImplicitMidpoint => midpoint_step(system, n, &z, opts).transpose(),
        };
        let failure = match next {
            None => Some("implicit midpoint iteration did not converge".to_string()),
            Some(Err(e)) => Some(e.to_string()),
            Some(Ok(v)) if v.iter().any(|c| !c.is_finite() || c.abs() > BLOWUP) => Some("state overflow".to_string()),
            Some(Ok(v)) => {
                z = v;
                None
            }
        };
        if let Some(reason) = failure {
            return Err(IntegrationError::Diverged {
                step,
                reason,
                partial: Box::new(Trajectory {
                    times,
                    states,
                    audit: monitor.report,
                }),
            });
        }
        let point = PhasePoint::unpack(n, &z);
        if let Err(e) = monitor.observe(system, &point) {
            return Err(IntegrationError::Diverged {
                step,
                reason: e.to_string(),
                partial: Box::new(Trajectory {
                    times,
                    states,
                    audit: monitor.report,
                }),
            });
        }
        if step % opts.record_every == 0 || step == opts.steps {
            times.push(step as f64 * opts.dt);
            states.push(point);
        }
    }
    Ok(Trajectory {
        times,
        states,
        audit: monitor.report,
    })
}
