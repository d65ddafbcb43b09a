use crate::error::{Error, Result};
use crate::geometry::TwoPolarForm;
use crate::kinematics::PhasePoint;
use crate::linalg::{Mat, Vector};

/// Momenta adapted to `φ = L D Rᵀ` (Euclidean chart).
#[derive(Debug, Clone, PartialEq)]
pub struct TwoPolarMomenta {
    /// `L⁻¹ S L`
    pub rho_hat: Mat,
    /// `−R⁻¹ V R`
    pub tau_hat: Mat,
    /// Conjugate to the invariants `q^a`.
    pub p_a: Vector,
    /// `−ρ̂ − τ̂`
    pub m: Mat,
    /// `ρ̂ − τ̂`
    pub n: Mat,
    pub degenerate: bool,
}

/// Reads off `p_a`, `ρ̂`, `τ̂` from `K = Rᵀ Σ̂ R`.
///
/// With `χ̂ = L⁻¹L̇` and `ϑ̂ = R⁻¹Ṙ` one has
/// `Ω̂ = R (D⁻¹χ̂D + diag q̇ − ϑ̂) Rᵀ`, so `Tr(Σ̂Ω̂)` splits into
/// `Σ K_aa q̇^a + ½Tr(ρ̂χ̂) + ½Tr(τ̂ϑ̂)` with `ρ̂ = X − Xᵀ`, `X = DKD⁻¹`
/// and `τ̂ = −(K − Kᵀ)`.
pub fn two_polar_momenta(point: &PhasePoint, tp: &TwoPolarForm) -> Result<TwoPolarMomenta> {
    let n = tp.dim();
    if point.dim() != n {
        return Err(Error::ShapeError(format!(
            "phase point of dimension {} with two-polar form of dimension {n}",
            point.dim()
        )));
    }
    let sigma_hat = &point.pi * &point.phi;
    let k = tp.r.transpose() * sigma_hat * &tp.r;
    let d = tp.stretches();
    let x = Mat::from_fn(n, n, |a, b| d[a] * k[(a, b)] / d[b]);
    let rho_hat = &x - x.transpose();
    let tau_hat = -(&k - k.transpose());
    let p_a = k.diagonal();
    Ok(TwoPolarMomenta {
        m: -&rho_hat - &tau_hat,
        n: &rho_hat - &tau_hat,
        rho_hat,
        tau_hat,
        p_a,
        degenerate: tp.degenerate,
    })
}

/// Rebuilds `Σ̂` from `(p_a, M, N)` at invariants `q` and material frame `R`.
///
/// Off-diagonal entries of `K` follow from
/// `M_ab = (Q_b − Q_a)(K_ab/Q_b + K_ba/Q_a)` and
/// `N_ab = (Q_a + Q_b)(K_ab/Q_b − K_ba/Q_a)`.
pub fn sigma_hat_from_two_polar(q: &Vector, r: &Mat, p_a: &Vector, m: &Mat, nn: &Mat) -> Result<Mat> {
    let n = q.len();
    let qq = q.map(f64::exp);
    let mut k = Mat::zeros(n, n);
    for a in 0..n {
        k[(a, a)] = p_a[a];
        for b in 0..n {
            if a == b {
                continue;
            }
            let diff = qq[b] - qq[a];
            if diff == 0.0 {
                return Err(Error::DomainError("coincident invariants".into()));
            }
            k[(a, b)] = 0.5 * qq[b] * (m[(a, b)] / diff + nn[(a, b)] / (qq[a] + qq[b]));
        }
    }
    Ok(r * k * r.transpose())
}

/// `Tr(Σ̂²)` as the two-polar lattice sum over ordered pairs `a ≠ b`.
pub fn casimir2_two_polar(q: &Vector, tpm: &TwoPolarMomenta) -> f64 {
    let n = q.len();
    let mut c = tpm.p_a.iter().map(|v| v * v).sum::<f64>();
    c += lattice_terms(q, &tpm.m, &tpm.n, n);
    c
}

/// `Tr(σ̂²)` for the traceless part: `(1/2n)Σ(p_a − p_b)²` plus the same lattice terms.
pub fn sl_casimir_two_polar(q: &Vector, tpm: &TwoPolarMomenta) -> f64 {
    let n = q.len();
    let mut c = 0.0;
    for a in 0..n {
        for b in 0..n {
            let d = tpm.p_a[a] - tpm.p_a[b];
            c += d * d;
        }
    }
    c / (2.0 * n as f64) + lattice_terms(q, &tpm.m, &tpm.n, n)
}

fn lattice_terms(q: &Vector, m: &Mat, nn: &Mat, n: usize) -> f64 {
    let mut c = 0.0;
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            let h = 0.5 * (q[a] - q[b]);
            c += m[(a, b)].powi(2) / (16.0 * h.sinh().powi(2));
            c -= nn[(a, b)].powi(2) / (16.0 * h.cosh().powi(2));
        }
    }
    c
}

/// Planar spin and vorticity scalars `p_α = ½Tr(S J₂)`, `p_β = ½Tr(V J₂)`.
pub fn planar_momenta(s: &Mat, v: &Mat) -> (f64, f64) {
    let j2 = Mat::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
    (0.5 * (s * &j2).trace(), 0.5 * (v * &j2).trace())
}
