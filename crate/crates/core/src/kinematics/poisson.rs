use crate::error::{Error, Result};
use crate::kinematics::{PhasePoint, PhaseTangent};
use crate::linalg::Vector;

/// Default relative finite-difference step; the absolute step is `h(1 + |z|)`.
pub const FD_STEP: f64 = 1e-5;

/// Partial derivatives of a phase-space function in canonical slot order.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseGradient {
    pub dq: Vec<f64>,
    pub dp: Vec<f64>,
}

/// Central-difference gradient of `f` at `point`.
pub fn fd_gradient<F>(f: F, point: &PhasePoint, step: f64) -> Result<PhaseGradient>
where
    F: Fn(&PhasePoint) -> f64,
{
    let n = point.dim();
    let (q, p) = point.to_canonical();
    let diff = |which: usize| -> Result<Vec<f64>> {
        let base = if which == 0 { &q } else { &p };
        let mut out = vec![0.0; base.len()];
        for k in 0..base.len() {
            let h = step * (1.0 + base[k].abs());
            let mut plus = base.clone();
            let mut minus = base.clone();
            plus[k] += h;
            minus[k] -= h;
            let (fp, fm) = if which == 0 {
                (
                    f(&PhasePoint::from_canonical(n, &plus, &p)),
                    f(&PhasePoint::from_canonical(n, &minus, &p)),
                )
            } else {
                (
                    f(&PhasePoint::from_canonical(n, &q, &plus)),
                    f(&PhasePoint::from_canonical(n, &q, &minus)),
                )
            };
            out[k] = (fp - fm) / (2.0 * h);
            if !out[k].is_finite() {
                return Err(Error::NumericalFailure(format!("non-finite derivative in slot {k}")));
            }
        }
        Ok(out)
    };
    Ok(PhaseGradient {
        dq: diff(0)?,
        dp: diff(1)?,
    })
}

/// `{f, g} = Σ ∂f/∂q ∂g/∂p − ∂f/∂p ∂g/∂q`.
pub fn bracket_from_gradients(f: &PhaseGradient, g: &PhaseGradient) -> f64 {
    let mut s = 0.0;
    for k in 0..f.dq.len() {
        s += f.dq[k] * g.dp[k] - f.dp[k] * g.dq[k];
    }
    s
}

pub fn poisson_bracket<F, G>(f: F, g: G, point: &PhasePoint) -> Result<f64>
where
    F: Fn(&PhasePoint) -> f64,
    G: Fn(&PhasePoint) -> f64,
{
    let gf = fd_gradient(f, point, FD_STEP)?;
    let gg = fd_gradient(g, point, FD_STEP)?;
    Ok(bracket_from_gradients(&gf, &gg))
}

/// Hamiltonian vector field of `h` by finite differences: `ż = {z, H}`.
pub fn fd_hamiltonian_flow<F>(h: F, point: &PhasePoint) -> Result<PhaseTangent>
where
    F: Fn(&PhasePoint) -> f64,
{
    let n = point.dim();
    let grad = fd_gradient(h, point, FD_STEP)?;
    let qdot = grad.dp.clone();
    let pdot: Vec<f64> = grad.dq.iter().map(|v| -v).collect();
    let tangent = PhasePoint::from_canonical(n, &qdot, &pdot);
    Ok(PhaseTangent {
        xdot: tangent.x,
        phidot: tangent.phi,
        pdot: tangent.p,
        pidot: tangent.pi,
    })
}

/// Co-moving linear momentum `p̂ = φᵀ p`.
pub fn material_linear_momentum(point: &PhasePoint) -> Vector {
    point.phi.transpose() * &point.p
}

/// `Σ = φP` as an evaluable matrix entry.
pub fn sigma_entry(i: usize, j: usize) -> impl Fn(&PhasePoint) -> f64 {
    move |pt| (&pt.phi * &pt.pi)[(i, j)]
}

/// `Σ̂ = Pφ` as an evaluable matrix entry.
pub fn sigma_hat_entry(a: usize, b: usize) -> impl Fn(&PhasePoint) -> f64 {
    move |pt| (&pt.pi * &pt.phi)[(a, b)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Mat;

    fn sample() -> PhasePoint {
        PhasePoint::new(
            Vector::from_vec(vec![0.3, -1.2]),
            Mat::from_row_slice(2, 2, &[1.3, 0.2, -0.1, 0.8]),
            Vector::from_vec(vec![0.7, 0.25]),
            Mat::from_row_slice(2, 2, &[0.4, -0.3, 0.9, 0.1]),
        )
        .unwrap()
    }

    #[test]
    fn canonical_pairs() {
        let pt = sample();
        for i in 0..2 {
            for j in 0..2 {
                let b = poisson_bracket(move |z| z.x[i], move |z| z.p[j], &pt).unwrap();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((b - expect).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn spin_algebra() {
        let pt = sample();
        let n = 2;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let b = poisson_bracket(sigma_entry(i, j), sigma_entry(k, l), &pt).unwrap();
                        let s = &pt.phi * &pt.pi;
                        let mut expect = 0.0;
                        if i == l {
                            expect += s[(k, j)];
                        }
                        if k == j {
                            expect -= s[(i, l)];
                        }
                        assert!((b - expect).abs() < 1e-6, "{{Σ{i}{j}, Σ{k}{l}}} = {b}, want {expect}");
                        let c = poisson_bracket(sigma_entry(i, j), sigma_hat_entry(k, l), &pt).unwrap();
                        assert!(c.abs() < 1e-6);
                    }
                }
            }
        }
    }

    #[test]
    fn fd_flow_of_kinetic_term() {
        let pt = sample();
        let flow = fd_hamiltonian_flow(|z| 0.5 * z.p.norm_squared(), &pt).unwrap();
        assert!((&flow.xdot - &pt.p).amax() < 1e-9);
        assert!(flow.pdot.amax() < 1e-9);
    }
}
