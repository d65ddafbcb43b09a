use crate::error::{Error, Result};
use crate::geometry::{two_polar_decompose, MetricPair};
use crate::kinematics::{skew_norm_sq, spin_vorticity, two_polar_momenta, PhasePoint};
use crate::linalg::{metric_transpose, symmetric_eigen_ascending, try_inverse, Mat, Vector};

const DEGENERACY_TOL: f64 = 1e-12;

/// Kinetic-energy models.
///
/// `AffineMetric` is affinely invariant in space and metrical (η) in the
/// body; `MetricAffine` is the mirror case. Every model carries a
/// translational mass.
#[derive(Debug, Clone, PartialEq)]
pub enum InertiaModel {
    DAlembert { m: f64, j: Mat },
    AffineAffine { m: f64, a: f64, b: f64 },
    AffineMetric { m: f64, i: f64, a: f64, b: f64 },
    MetricAffine { m: f64, i: f64, a: f64, b: f64 },
}

/// Generalized velocities `(ẋ, φ̇)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Velocities {
    pub xdot: Vector,
    pub phidot: Mat,
}

/// Reciprocal constants of the Casimir form `(1/2α)C(2) + (1/2β)C(1)² + (1/2μ)‖·‖²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CasimirCoefficients {
    pub inv_alpha: f64,
    pub inv_beta: f64,
    pub inv_mu: f64,
}

fn near_zero(v: f64, scale: f64) -> bool {
    v.abs() <= DEGENERACY_TOL * scale.max(1.0)
}

impl InertiaModel {
    pub fn mass(&self) -> f64 {
        match *self {
            InertiaModel::DAlembert { m, .. }
            | InertiaModel::AffineAffine { m, .. }
            | InertiaModel::AffineMetric { m, .. }
            | InertiaModel::MetricAffine { m, .. } => m,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            InertiaModel::DAlembert { .. } => "dalembert",
            InertiaModel::AffineAffine { .. } => "affine_affine",
            InertiaModel::AffineMetric { .. } => "affine_metric",
            InertiaModel::MetricAffine { .. } => "metric_affine",
        }
    }

    /// `(I, A, B)`; the affine-affine model has `I = 0`.
    pub fn invariant_constants(&self) -> Option<(f64, f64, f64)> {
        match *self {
            InertiaModel::DAlembert { .. } => None,
            InertiaModel::AffineAffine { a, b, .. } => Some((0.0, a, b)),
            InertiaModel::AffineMetric { i, a, b, .. } | InertiaModel::MetricAffine { i, a, b, .. } => Some((i, a, b)),
        }
    }

    /// Translational energy uses `η` pulled back by `φ` (spatially affine models)
    /// rather than `g`.
    pub fn affine_translation(&self) -> bool {
        matches!(
            self,
            InertiaModel::AffineAffine { .. } | InertiaModel::AffineMetric { .. }
        )
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        let m = self.mass();
        if !(m > 0.0 && m.is_finite()) {
            return Err(Error::InvalidModel(format!("mass must be positive, got {m}")));
        }
        let nf = n as f64;
        match self {
            InertiaModel::DAlembert { j, .. } => {
                if j.shape() != (n, n) {
                    return Err(Error::InvalidModel(format!("J must be {n}×{n}, got {:?}", j.shape())));
                }
                if !crate::linalg::is_symmetric(j, 1e-12) {
                    return Err(Error::InvalidModel("J must be symmetric".into()));
                }
                let (vals, _) = symmetric_eigen_ascending(j);
                if vals[0] <= 0.0 {
                    return Err(Error::InvalidModel("J must be positive-definite".into()));
                }
            }
            InertiaModel::AffineAffine { a, b, .. } => {
                let scale = a.abs() + nf * b.abs();
                if !a.is_finite() || !b.is_finite() {
                    return Err(Error::InvalidModel("A, B must be finite".into()));
                }
                if near_zero(*a, scale) {
                    return Err(Error::InvalidModel("A must be non-zero".into()));
                }
                if near_zero(a + nf * b, scale) {
                    return Err(Error::InvalidModel(format!(
                        "A + nB = 0 (A = {a}, B = {b}, n = {n}): degenerate dilatational metric"
                    )));
                }
            }
            InertiaModel::AffineMetric { i, a, b, .. } | InertiaModel::MetricAffine { i, a, b, .. } => {
                if !i.is_finite() || !a.is_finite() || !b.is_finite() {
                    return Err(Error::InvalidModel("I, A, B must be finite".into()));
                }
                let scale = i.abs() + a.abs() + nf * b.abs();
                if near_zero(i + a, scale) {
                    return Err(Error::InvalidModel("I + A = 0".into()));
                }
                if near_zero(i * i - a * a, scale * scale) {
                    return Err(Error::InvalidModel("I² = A²".into()));
                }
                if near_zero(i + a + nf * b, scale) {
                    return Err(Error::InvalidModel(format!(
                        "I + A + nB = 0 (I = {i}, A = {a}, B = {b}, n = {n}): degenerate dilatational metric"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Whether the kinetic metric is positive-definite (informational).
    pub fn is_positive_definite(&self, n: usize) -> bool {
        let nf = n as f64;
        match self {
            InertiaModel::DAlembert { .. } => true,
            InertiaModel::AffineAffine { a, b, .. } => *a > 0.0 && a + nf * b > 0.0,
            InertiaModel::AffineMetric { i, a, b, .. } | InertiaModel::MetricAffine { i, a, b, .. } => {
                i - a > 0.0 && i + a > 0.0 && i + a + nf * b > 0.0
            }
        }
    }

    pub fn casimir_coefficients(&self, n: usize) -> Option<CasimirCoefficients> {
        let (i, a, b) = self.invariant_constants()?;
        let nf = n as f64;
        let alpha = i + a;
        Some(CasimirCoefficients {
            inv_alpha: 1.0 / alpha,
            inv_beta: -b / (alpha * (alpha + nf * b)),
            inv_mu: i / (i * i - a * a),
        })
    }
}

fn check_shapes(n: usize, phi: &Mat, metrics: &MetricPair) -> Result<()> {
    if phi.shape() != (n, n) || metrics.dim() != n {
        return Err(Error::ShapeError(format!(
            "configuration {:?} with metrics of dimension {}",
            phi.shape(),
            metrics.dim()
        )));
    }
    Ok(())
}

/// Invariant-model energy in a representation where the metrical term reads
/// `Tr(Ω k⁻¹ Ωᵀ k)` (`k = η` co-moving, `k = g` spatial).
fn invariant_velocity_energy(i: f64, a: f64, b: f64, omega: &Mat, k: &Mat, k_inv: &Mat) -> f64 {
    let tr = omega.trace();
    0.5 * i * (omega * k_inv * omega.transpose() * k).trace() + 0.5 * a * (omega * omega).trace() + 0.5 * b * tr * tr
}

fn translational_energy(model: &InertiaModel, metrics: &MetricPair, phi: &Mat, xdot: &Vector) -> Result<f64> {
    let m = model.mass();
    if model.affine_translation() {
        let v_hat = try_inverse(phi)? * xdot;
        Ok(0.5 * m * (v_hat.transpose() * metrics.eta() * &v_hat)[(0, 0)])
    } else {
        Ok(0.5 * m * (xdot.transpose() * metrics.g() * xdot)[(0, 0)])
    }
}

/// Translational energy via Cauchy or Green tensor.
fn translational_energy_alt(model: &InertiaModel, metrics: &MetricPair, phi: &Mat, xdot: &Vector) -> Result<f64> {
    let m = model.mass();
    let phi_inv = try_inverse(phi)?;
    if model.affine_translation() {
        let cauchy = phi_inv.transpose() * metrics.eta() * &phi_inv;
        Ok(0.5 * m * (xdot.transpose() * cauchy * xdot)[(0, 0)])
    } else {
        let green = phi.transpose() * metrics.g() * phi;
        let v_hat = &phi_inv * xdot;
        Ok(0.5 * m * (v_hat.transpose() * green * &v_hat)[(0, 0)])
    }
}

/// Kinetic energy `T(φ; ẋ, φ̇)`.
pub fn kinetic_energy(model: &InertiaModel, metrics: &MetricPair, phi: &Mat, vel: &Velocities) -> Result<f64> {
    let n = phi.nrows();
    model.validate(n)?;
    check_shapes(n, phi, metrics)?;
    let t_tr = translational_energy(model, metrics, phi, &vel.xdot)?;
    let t_int = match model {
        InertiaModel::DAlembert { j, .. } => 0.5 * (metrics.g() * &vel.phidot * j * vel.phidot.transpose()).trace(),
        InertiaModel::AffineAffine { a, b, .. } => {
            let w = try_inverse(phi)? * &vel.phidot;
            invariant_velocity_energy(0.0, *a, *b, &w, metrics.eta(), metrics.eta_inv())
        }
        InertiaModel::AffineMetric { i, a, b, .. } => {
            let w = try_inverse(phi)? * &vel.phidot;
            invariant_velocity_energy(*i, *a, *b, &w, metrics.eta(), metrics.eta_inv())
        }
        InertiaModel::MetricAffine { i, a, b, .. } => {
            let w = &vel.phidot * try_inverse(phi)?;
            invariant_velocity_energy(*i, *a, *b, &w, metrics.g(), metrics.g_inv())
        }
    };
    Ok(t_tr + t_int)
}

/// Second route to `T`: Green-tensor form for d'Alembert, the opposite
/// representation with Cauchy/Green tensors for the invariant models.
pub fn kinetic_energy_alt(model: &InertiaModel, metrics: &MetricPair, phi: &Mat, vel: &Velocities) -> Result<f64> {
    let n = phi.nrows();
    model.validate(n)?;
    check_shapes(n, phi, metrics)?;
    let t_tr = translational_energy_alt(model, metrics, phi, &vel.xdot)?;
    let phi_inv = try_inverse(phi)?;
    let w_hat = &phi_inv * &vel.phidot;
    let w = &vel.phidot * &phi_inv;
    let green = phi.transpose() * metrics.g() * phi;
    let cauchy = phi_inv.transpose() * metrics.eta() * &phi_inv;
    let t_int = match model {
        InertiaModel::DAlembert { j, .. } => 0.5 * (&green * &w_hat * j * w_hat.transpose()).trace(),
        InertiaModel::AffineAffine { a, b, .. } => {
            invariant_velocity_energy(0.0, *a, *b, &w, &cauchy, &try_inverse(&cauchy)?)
        }
        InertiaModel::AffineMetric { i, a, b, .. } => {
            invariant_velocity_energy(*i, *a, *b, &w, &cauchy, &try_inverse(&cauchy)?)
        }
        InertiaModel::MetricAffine { i, a, b, .. } => {
            invariant_velocity_energy(*i, *a, *b, &w_hat, &green, &try_inverse(&green)?)
        }
    };
    Ok(t_tr + t_int)
}

/// Legendre map `(ẋ, φ̇) ↦ (p, P)` with `dT = p·dẋ + Tr(P dφ̇)`.
pub fn legendre(model: &InertiaModel, metrics: &MetricPair, phi: &Mat, vel: &Velocities) -> Result<(Vector, Mat)> {
    let n = phi.nrows();
    model.validate(n)?;
    check_shapes(n, phi, metrics)?;
    let m = model.mass();
    let phi_inv = try_inverse(phi)?;
    let p = if model.affine_translation() {
        phi_inv.transpose() * metrics.eta() * &phi_inv * &vel.xdot * m
    } else {
        metrics.g() * &vel.xdot * m
    };
    let pi = match model {
        InertiaModel::DAlembert { j, .. } => j * vel.phidot.transpose() * metrics.g(),
        InertiaModel::AffineAffine { a, b, .. } => {
            let w = &phi_inv * &vel.phidot;
            let sigma_hat = &w * *a + Mat::identity(n, n) * (b * w.trace());
            sigma_hat * &phi_inv
        }
        InertiaModel::AffineMetric { i, a, b, .. } => {
            let w = &phi_inv * &vel.phidot;
            let sigma_hat = metric_transpose(&w, metrics.eta(), metrics.eta_inv()) * *i
                + &w * *a
                + Mat::identity(n, n) * (b * w.trace());
            sigma_hat * &phi_inv
        }
        InertiaModel::MetricAffine { i, a, b, .. } => {
            let w = &vel.phidot * &phi_inv;
            let sigma = metric_transpose(&w, metrics.g(), metrics.g_inv()) * *i
                + &w * *a
                + Mat::identity(n, n) * (b * w.trace());
            &phi_inv * sigma
        }
    };
    Ok((p, pi))
}

/// Solves `Σ = I k⁻¹Ωᵀk + AΩ + B TrΩ Id` for `Ω` by splitting into
/// `k`-symmetric and `k`-antisymmetric parts.
fn invert_invariant(i: f64, a: f64, b: f64, sigma: &Mat, k: &Mat, k_inv: &Mat) -> Result<Mat> {
    let n = sigma.nrows();
    let nf = n as f64;
    let scale = i.abs() + a.abs() + nf * b.abs();
    let alpha = i + a;
    if near_zero(alpha, scale) || near_zero(alpha + nf * b, scale) {
        return Err(Error::DegenerateLegendre(format!(
            "I + A = {alpha}, I + A + nB = {}",
            alpha + nf * b
        )));
    }
    let adj = metric_transpose(sigma, k, k_inv);
    let sym = (sigma + &adj) * 0.5;
    let anti = (sigma - &adj) * 0.5;
    let tr_s = sigma.trace() / (alpha + nf * b);
    let s = (sym - Mat::identity(n, n) * (b * tr_s)) / alpha;
    let w = if anti.amax() == 0.0 {
        anti
    } else {
        if near_zero(a - i, scale) {
            return Err(Error::DegenerateLegendre(
                "A = I: antisymmetric block has zero inertia".into(),
            ));
        }
        anti / (a - i)
    };
    Ok(s + w)
}

/// Inverse Legendre map `(p, P) ↦ (ẋ, φ̇)`.
pub fn inverse_legendre(model: &InertiaModel, metrics: &MetricPair, point: &PhasePoint) -> Result<Velocities> {
    let n = point.dim();
    model.validate(n)?;
    check_shapes(n, &point.phi, metrics)?;
    let m = model.mass();
    let phi = &point.phi;
    let xdot = if model.affine_translation() {
        phi * metrics.eta_inv() * phi.transpose() * &point.p / m
    } else {
        metrics.g_inv() * &point.p / m
    };
    let phidot = match model {
        InertiaModel::DAlembert { j, .. } => metrics.g_inv() * point.pi.transpose() * try_inverse(j)?,
        InertiaModel::AffineAffine { a, b, .. } => {
            let w = invert_invariant(0.0, *a, *b, &(&point.pi * phi), metrics.eta(), metrics.eta_inv())?;
            phi * w
        }
        InertiaModel::AffineMetric { i, a, b, .. } => {
            let w = invert_invariant(*i, *a, *b, &(&point.pi * phi), metrics.eta(), metrics.eta_inv())?;
            phi * w
        }
        InertiaModel::MetricAffine { i, a, b, .. } => {
            let w = invert_invariant(*i, *a, *b, &(phi * &point.pi), metrics.g(), metrics.g_inv())?;
            w * phi
        }
    };
    Ok(Velocities { xdot, phidot })
}

fn translational_hamiltonian(model: &InertiaModel, metrics: &MetricPair, point: &PhasePoint) -> f64 {
    let m = model.mass();
    if model.affine_translation() {
        let p_hat = point.phi.transpose() * &point.p;
        (p_hat.transpose() * metrics.eta_inv() * &p_hat)[(0, 0)] / (2.0 * m)
    } else {
        (point.p.transpose() * metrics.g_inv() * &point.p)[(0, 0)] / (2.0 * m)
    }
}

/// Kinetic Hamiltonian `𝒯(φ; p, P)`.
///
/// Invariant models are evaluated in the Casimir form
/// `(1/2α)C(2) + (1/2β)C(1)² + (1/2μ)‖V or S‖²`.
pub fn kinetic_hamiltonian(model: &InertiaModel, metrics: &MetricPair, point: &PhasePoint) -> Result<f64> {
    let n = point.dim();
    model.validate(n)?;
    check_shapes(n, &point.phi, metrics)?;
    Ok(translational_hamiltonian(model, metrics, point) + internal_hamiltonian(model, metrics, point)?)
}

fn internal_hamiltonian(model: &InertiaModel, metrics: &MetricPair, point: &PhasePoint) -> Result<f64> {
    let n = point.dim();
    Ok(match model {
        InertiaModel::DAlembert { j, .. } => {
            0.5 * (try_inverse(j)? * &point.pi * metrics.g_inv() * point.pi.transpose()).trace()
        }
        _ => {
            let c = model.casimir_coefficients(n).expect("invariant model");
            let sv = spin_vorticity(point, metrics)?;
            let skew = match model {
                InertiaModel::AffineMetric { .. } => skew_norm_sq(&sv.v),
                InertiaModel::MetricAffine { .. } => skew_norm_sq(&sv.s),
                _ => 0.0,
            };
            0.5 * c.inv_alpha * (&sv.sigma_hat * &sv.sigma_hat).trace()
                + 0.5 * c.inv_beta * sv.p * sv.p
                + 0.5 * c.inv_mu * skew
        }
    })
}

/// Every available evaluation of `𝒯` at `point`, labelled by formula.
///
/// Two-polar lattice forms are included when the metrics are Euclidean,
/// the invariants are non-degenerate and (for d'Alembert) `J` is isotropic.
pub fn kinetic_hamiltonian_forms(
    model: &InertiaModel,
    metrics: &MetricPair,
    point: &PhasePoint,
) -> Result<Vec<(&'static str, f64)>> {
    let n = point.dim();
    let nf = n as f64;
    model.validate(n)?;
    check_shapes(n, &point.phi, metrics)?;
    let tr = translational_hamiltonian(model, metrics, point);
    let phi = &point.phi;
    let pi = &point.pi;
    let mut out = vec![("casimir", kinetic_hamiltonian(model, metrics, point)?)];

    // Legendre route: 𝒯 = p·ẋ + Tr(Pφ̇) − T.
    let vel = inverse_legendre(model, metrics, point)?;
    let pairing = point.p.dot(&vel.xdot) + (pi * &vel.phidot).trace();
    out.push(("legendre", pairing - kinetic_energy(model, metrics, phi, &vel)?));

    let sv = spin_vorticity(point, metrics)?;
    match model {
        InertiaModel::DAlembert { j, .. } => {
            let j_inv = try_inverse(j)?;
            let g_inv = metrics.g_inv();
            let green_inv = try_inverse(&(phi.transpose() * metrics.g() * phi))?;
            let j_phi_inv = try_inverse(&(phi * j * phi.transpose()))?;
            out.push(("canonical", tr + 0.5 * (&j_inv * pi * g_inv * pi.transpose()).trace()));
            out.push((
                "co-moving spin",
                tr + 0.5 * (&j_inv * &sv.sigma_hat * green_inv * sv.sigma_hat.transpose()).trace(),
            ));
            out.push((
                "spatial spin",
                tr + 0.5 * (j_phi_inv * &sv.sigma * g_inv * sv.sigma.transpose()).trace(),
            ));
            let inertia = j[(0, 0)];
            let isotropic = (j - Mat::identity(n, n) * inertia).amax() <= 1e-14 * inertia;
            if isotropic && metrics.is_euclidean() {
                let tp = two_polar_decompose(phi)?;
                if !tp.degenerate {
                    let tpm = two_polar_momenta(point, &tp)?;
                    let qq = tp.stretches();
                    let mut t = 0.0;
                    for a in 0..n {
                        t += (tpm.p_a[a] / qq[a]).powi(2) / (2.0 * inertia);
                        for b in 0..n {
                            if a != b {
                                t += tpm.m[(a, b)].powi(2) / (8.0 * inertia * (qq[a] - qq[b]).powi(2));
                                t += tpm.n[(a, b)].powi(2) / (8.0 * inertia * (qq[a] + qq[b]).powi(2));
                            }
                        }
                    }
                    out.push(("two-polar", tr + t));
                }
            }
        }
        _ => {
            let (i, a, b) = model.invariant_constants().expect("invariant model");
            let c = model.casimir_coefficients(n).expect("invariant model");
            let alpha = i + a;
            let p = sv.p;
            // Index form with reciprocal constants Ĩ, Ã, B̃.
            let inv_a_tilde = c.inv_alpha - c.inv_mu;
            let (metric_term, skew) = match model {
                InertiaModel::MetricAffine { .. } => (
                    (sv.sigma.transpose() * metrics.g() * &sv.sigma * metrics.g_inv()).trace(),
                    skew_norm_sq(&sv.s),
                ),
                _ => (
                    (sv.sigma_hat.transpose() * metrics.eta() * &sv.sigma_hat * metrics.eta_inv()).trace(),
                    skew_norm_sq(&sv.v),
                ),
            };
            let c2 = (&sv.sigma_hat * &sv.sigma_hat).trace();
            out.push((
                "index",
                tr + 0.5 * c.inv_mu * metric_term + 0.5 * inv_a_tilde * c2 + 0.5 * c.inv_beta * p * p,
            ));
            // Shear/dilatation split.
            let c_sl = c2 - p * p / nf;
            let skew_coeff = i / (i * i - a * a);
            let split = c_sl / (2.0 * alpha) + p * p / (2.0 * nf * (alpha + nf * b)) + 0.5 * skew_coeff * skew;
            out.push(("split", tr + split));
            if matches!(model, InertiaModel::AffineAffine { .. }) {
                out.push((
                    "trace-corrected",
                    tr + c2 / (2.0 * a) - b / (2.0 * a * (a + nf * b)) * p * p,
                ));
            }
            if metrics.is_euclidean() {
                let tp = two_polar_decompose(phi)?;
                if !tp.degenerate {
                    let tpm = two_polar_momenta(point, &tp)?;
                    let q = &tp.q;
                    let mut t = 0.0;
                    for x in 0..n {
                        for y in 0..n {
                            t += (tpm.p_a[x] - tpm.p_a[y]).powi(2) / (4.0 * alpha * nf);
                            if x != y {
                                let h = 0.5 * (q[x] - q[y]);
                                t += tpm.m[(x, y)].powi(2) / (32.0 * alpha * h.sinh().powi(2));
                                t -= tpm.n[(x, y)].powi(2) / (32.0 * alpha * h.cosh().powi(2));
                            }
                        }
                    }
                    let psum = tpm.p_a.sum();
                    t += psum * psum / (2.0 * nf * (alpha + nf * b));
                    let lattice_skew = match model {
                        InertiaModel::AffineMetric { .. } => skew_norm_sq(&tpm.tau_hat),
                        InertiaModel::MetricAffine { .. } => skew_norm_sq(&tpm.rho_hat),
                        _ => 0.0,
                    };
                    t += 0.5 * skew_coeff * lattice_skew;
                    out.push(("two-polar", tr + t));
                }
            }
        }
    }
    Ok(out)
}
