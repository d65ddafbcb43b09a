use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::dynamics::InertiaModel;
use crate::error::{Error, Result};
use crate::geometry::{measure_weights, WeightKind};
use crate::quantum::{angular_momentum_matrices, lanczos_lowest, CMat, Channel3};

/// Cubic grid of cell centres `lo + (i + ½)h`, `h = (hi − lo)/points`, per axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid3 {
    pub points: usize,
    pub lo: f64,
    pub hi: f64,
}

impl Grid3 {
    pub fn spacing(&self) -> f64 {
        (self.hi - self.lo) / self.points as f64
    }

    pub fn coord(&self, i: usize) -> f64 {
        self.lo + (i as f64 + 0.5) * self.spacing()
    }
}

pub type Potential3 = Arc<dyn Fn(&[f64; 3]) -> f64 + Send + Sync>;

/// Reduced operator acting on `(2s+1)×(2j+1)` amplitudes over the ordered
/// chamber `q¹ < q² < q³` (or `Q¹ < Q² < Q³`).
///
/// Nodes within a quarter spacing of a coincidence plane are masked and,
/// like the box walls, carry Dirichlet conditions.
#[derive(Clone)]
pub struct ReducedOperator3D {
    pub channel: Channel3,
    pub kind: WeightKind,
    pub grid: Grid3,
    /// `ħ²/2α` (or `ħ²/2I`) in front of `−D`.
    pub kinetic: f64,
    /// Coefficient `c` of `−c(Σ_a ∂_a)²` (zero for d'Alembert).
    pub dilatation: f64,
    /// `1/16α` or `1/4I`.
    pub pair: f64,
    /// Constant spin or vorticity Casimir term.
    pub shift: f64,
    pub potential: Option<Potential3>,
    minus: [CMat; 3],
    plus: [CMat; 3],
    nodes: Vec<[usize; 3]>,
    index: Vec<usize>,
}

impl fmt::Debug for ReducedOperator3D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ReducedOperator3D")
            .field("channel", &self.channel)
            .field("kind", &self.kind)
            .field("grid", &self.grid)
            .field("kinetic", &self.kinetic)
            .field("dilatation", &self.dilatation)
            .field("pair", &self.pair)
            .field("shift", &self.shift)
            .field("active_nodes", &self.nodes.len())
            .finish_non_exhaustive()
    }
}

const MASKED: usize = usize::MAX;

/// Row-major `vec(X f Y) = (X ⊗ Yᵀ) vec(f)`.
fn kron_sandwich(x: &CMat, y: &CMat) -> CMat {
    let (dr, dc) = (x.nrows(), y.nrows());
    let mut out = CMat::zeros(dr * dc, dr * dc);
    for r in 0..dr {
        for r2 in 0..dr {
            let xv = x[(r, r2)];
            if xv == Complex64::new(0.0, 0.0) {
                continue;
            }
            for c in 0..dc {
                for c2 in 0..dc {
                    out[(r * dc + c, r2 * dc + c2)] += xv * y[(c2, c)];
                }
            }
        }
    }
    out
}

pub fn reduced_kinetic_3d(
    model: &InertiaModel,
    channel: Channel3,
    grid: Grid3,
    hbar: f64,
) -> Result<ReducedOperator3D> {
    if !(hbar > 0.0 && hbar.is_finite()) {
        return Err(Error::InvalidArgument(format!("ħ must be positive, got {hbar}")));
    }
    if grid.points < 4 || !(grid.lo.is_finite() && grid.hi.is_finite() && grid.hi > grid.lo) {
        return Err(Error::DomainError(format!("invalid grid {grid:?}")));
    }
    model.validate(3)?;
    let s = angular_momentum_matrices(channel.s.value(), hbar)?;
    let j = angular_momentum_matrices(channel.j.value(), hbar)?;
    let (kind, kinetic, dilatation, pair, shift) = match model {
        InertiaModel::DAlembert { j: inertia, .. } => {
            let i0 = inertia[(0, 0)];
            if (inertia - crate::linalg::identity(3) * i0).amax() > 1e-12 * i0.abs() {
                return Err(Error::InvalidModel(
                    "the d'Alembert reduction needs an isotropic J".into(),
                ));
            }
            if grid.lo < 0.0 {
                return Err(Error::DomainError("stretches Q must be positive".into()));
            }
            (
                WeightKind::Lebesgue,
                hbar * hbar / (2.0 * i0),
                0.0,
                1.0 / (4.0 * i0),
                0.0,
            )
        }
        _ => {
            let c = model.casimir_coefficients(3).expect("invariant model");
            let (i, a, _) = model.invariant_constants().expect("invariant model");
            let casimir = |l: f64| hbar * hbar * l * (l + 1.0);
            let shift = match model {
                InertiaModel::MetricAffine { .. } => 0.5 * c.inv_mu * casimir(channel.s.value()),
                InertiaModel::AffineMetric { .. } => 0.5 * c.inv_mu * casimir(channel.j.value()),
                _ => 0.0,
            };
            let alpha = i + a;
            (
                WeightKind::Haar,
                0.5 * hbar * hbar * c.inv_alpha,
                0.5 * hbar * hbar * c.inv_beta,
                1.0 / (16.0 * alpha),
                shift,
            )
        }
    };
    let (ds, dj) = (s.dim(), j.dim());
    let (is, ij) = (CMat::identity(ds, ds), CMat::identity(dj, dj));
    let two = Complex64::new(2.0, 0.0);
    let build = |sign: Complex64| -> [CMat; 3] {
        std::array::from_fn(|a| {
            let (sa, ja) = (&s.s[a], &j.s[a]);
            kron_sandwich(&(sa * sa), &ij) + kron_sandwich(sa, ja) * (sign * two) + kron_sandwich(&is, &(ja * ja))
        })
    };
    let minus = build(Complex64::new(-1.0, 0.0));
    let plus = build(Complex64::new(1.0, 0.0));

    let n = grid.points;
    let tol = 0.25 * grid.spacing();
    let mut index = vec![MASKED; n * n * n];
    let mut nodes = Vec::new();
    for i0 in 0..n {
        for i1 in 0..n {
            for i2 in 0..n {
                let q = [grid.coord(i0), grid.coord(i1), grid.coord(i2)];
                if q[1] - q[0] > tol && q[2] - q[1] > tol {
                    index[(i0 * n + i1) * n + i2] = nodes.len();
                    nodes.push([i0, i1, i2]);
                }
            }
        }
    }
    if nodes.is_empty() {
        return Err(Error::DomainError(
            "no grid node lies inside the ordered chamber".into(),
        ));
    }
    Ok(ReducedOperator3D {
        channel,
        kind,
        grid,
        kinetic,
        dilatation,
        pair,
        shift,
        potential: None,
        minus,
        plus,
        nodes,
        index,
    })
}

impl ReducedOperator3D {
    pub fn with_potential(mut self, v: impl Fn(&[f64; 3]) -> f64 + Send + Sync + 'static) -> Self {
        self.potential = Some(Arc::new(v));
        self
    }

    pub fn block(&self) -> usize {
        let (a, b) = self.channel.shape();
        a * b
    }

    pub fn active_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn unknowns(&self) -> usize {
        self.nodes.len() * self.block()
    }

    pub fn node(&self, k: usize) -> [f64; 3] {
        let [a, b, c] = self.nodes[k];
        [self.grid.coord(a), self.grid.coord(b), self.grid.coord(c)]
    }

    pub fn weight_at(&self, q: &[f64; 3]) -> f64 {
        measure_weights(q, self.kind)
    }

    /// Active index of the node displaced by `d`, if it is inside the box and unmasked.
    fn neighbour(&self, k: usize, d: [i64; 3]) -> Option<usize> {
        let n = self.grid.points as i64;
        let p = self.nodes[k];
        let mut flat = 0usize;
        for ax in 0..3 {
            let v = p[ax] as i64 + d[ax];
            if v < 0 || v >= n {
                return None;
            }
            flat = flat * self.grid.points + v as usize;
        }
        let idx = self.index[flat];
        (idx != MASKED).then_some(idx)
    }

    fn pair_coefficients(&self, q: &[f64; 3]) -> [(f64, f64); 3] {
        std::array::from_fn(|a| {
            let (b, c) = ((a + 1) % 3, (a + 2) % 3);
            match self.kind {
                WeightKind::Haar => {
                    let h = 0.5 * (q[b] - q[c]);
                    (self.pair / h.sinh().powi(2), -self.pair / h.cosh().powi(2))
                }
                WeightKind::Lebesgue => (self.pair / (q[b] - q[c]).powi(2), self.pair / (q[b] + q[c]).powi(2)),
            }
        })
    }

    /// The operator on amplitudes stored node-major, each block row-major.
    pub fn apply(&self, f: &[Complex64]) -> Result<Vec<Complex64>> {
        let d = self.block();
        if f.len() != self.unknowns() {
            return Err(Error::ShapeError(format!(
                "expected {} unknowns, got {}",
                self.unknowns(),
                f.len()
            )));
        }
        let h = self.grid.spacing();
        let inv_h2 = 1.0 / (h * h);
        let mut out = vec![Complex64::new(0.0, 0.0); f.len()];
        for k in 0..self.nodes.len() {
            let q = self.node(k);
            let w = self.weight_at(&q);
            let fk = &f[k * d..(k + 1) * d];
            let mut diag = self.shift + self.potential.as_ref().map_or(0.0, |v| v(&q));
            let mut acc = vec![Complex64::new(0.0, 0.0); d];
            for ax in 0..3 {
                for dir in [-1i64, 1] {
                    let mut qf = q;
                    qf[ax] += 0.5 * dir as f64 * h;
                    let c = self.kinetic * inv_h2 * self.weight_at(&qf) / w;
                    diag += c;
                    let mut disp = [0i64; 3];
                    disp[ax] = dir;
                    if let Some(nb) = self.neighbour(k, disp) {
                        for r in 0..d {
                            acc[r] -= f[nb * d + r] * c;
                        }
                    }
                }
            }
            if self.dilatation != 0.0 {
                let c = -self.dilatation * inv_h2;
                diag -= 2.0 * c;
                for dir in [-1i64, 1] {
                    if let Some(nb) = self.neighbour(k, [dir; 3]) {
                        for r in 0..d {
                            acc[r] += f[nb * d + r] * c;
                        }
                    }
                }
            }
            for r in 0..d {
                acc[r] += fk[r] * diag;
            }
            for (a, (cm, cp)) in self.pair_coefficients(&q).iter().enumerate() {
                let m = self.minus[a].map(|z| z * *cm) + self.plus[a].map(|z| z * *cp);
                for r in 0..d {
                    for c in 0..d {
                        acc[r] += m[(r, c)] * fk[c];
                    }
                }
            }
            out[k * d..(k + 1) * d].copy_from_slice(&acc);
        }
        Ok(out)
    }

    /// `(1/N(s)N(j)) Σ h³ P Tr(f₁⁺f₂)` over the active nodes.
    pub fn inner(&self, f1: &[Complex64], f2: &[Complex64]) -> Result<Complex64> {
        let d = self.block();
        if f1.len() != self.unknowns() || f2.len() != self.unknowns() {
            return Err(Error::ShapeError("amplitude length does not match the grid".into()));
        }
        let (ns, nj) = self.channel.shape();
        let h3 = self.grid.spacing().powi(3);
        let mut s = Complex64::new(0.0, 0.0);
        for k in 0..self.nodes.len() {
            let w = self.weight_at(&self.node(k));
            let t: Complex64 = (0..d).map(|r| f1[k * d + r].conj() * f2[k * d + r]).sum();
            s += t * w;
        }
        Ok(s * h3 / (ns * nj) as f64)
    }

    /// `|⟨f₁|Hf₂⟩ − conj⟨f₂|Hf₁⟩| / max(|⟨f₁|Hf₂⟩|, tiny)`.
    pub fn hermiticity_residual(&self, f1: &[Complex64], f2: &[Complex64]) -> Result<f64> {
        let a = self.inner(f1, &self.apply(f2)?)?;
        let b = self.inner(f2, &self.apply(f1)?)?;
        Ok((a - b.conj()).norm() / a.norm().max(1e-300))
    }

    /// Lowest distinct eigenvalues of `P^{1/2} H P^{−1/2}` by Lanczos.
    pub fn lowest_eigenvalues(&self, k: usize, tol: f64, max_iter: usize) -> Result<Vec<f64>> {
        let d = self.block();
        let roots: Vec<f64> = (0..self.nodes.len())
            .map(|i| self.weight_at(&self.node(i)).sqrt())
            .collect();
        lanczos_lowest(
            self.unknowns(),
            |g| {
                let f: Vec<Complex64> = g.iter().enumerate().map(|(i, z)| z / roots[i / d]).collect();
                let hf = self.apply(&f).expect("length checked");
                hf.iter().enumerate().map(|(i, z)| z * roots[i / d]).collect()
            },
            k,
            tol,
            max_iter,
        )
    }
}
