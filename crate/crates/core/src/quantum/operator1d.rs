use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum::{Level, Spectrum, Tridiagonal};

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variable {
    Shear,
    Dilatation,
    QPlus,
    QMinus,
    Radius,
    Angle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    Dirichlet,
    /// Zero flux. At an end where the weight vanishes this selects the
    /// regular solution and coincides with `Dirichlet`.
    NeumannRegular,
}

/// `H f = −c (1/w)(w f')' + V f` on an interval.
#[derive(Clone)]
pub struct ReducedOperator1D {
    pub variable: Variable,
    pub kinetic: f64,
    pub weight: ScalarFn,
    pub potential: ScalarFn,
    pub domain: (f64, f64),
    pub boundary: (Boundary, Boundary),
    /// Whether the right end is a box wall standing in for infinity.
    pub truncated: bool,
}

impl fmt::Debug for ReducedOperator1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ReducedOperator1D")
            .field("variable", &self.variable)
            .field("kinetic", &self.kinetic)
            .field("domain", &self.domain)
            .field("boundary", &self.boundary)
            .field("truncated", &self.truncated)
            .finish_non_exhaustive()
    }
}

impl ReducedOperator1D {
    pub fn new(
        variable: Variable,
        kinetic: f64,
        weight: impl Fn(f64) -> f64 + Send + Sync + 'static,
        potential: impl Fn(f64) -> f64 + Send + Sync + 'static,
        domain: (f64, f64),
    ) -> Self {
        Self {
            variable,
            kinetic,
            weight: Arc::new(weight),
            potential: Arc::new(potential),
            domain,
            boundary: (Boundary::Dirichlet, Boundary::Dirichlet),
            truncated: false,
        }
    }

    pub fn with_boundary(mut self, left: Boundary, right: Boundary) -> Self {
        self.boundary = (left, right);
        self
    }

    pub fn with_domain(mut self, lo: f64, hi: f64) -> Self {
        self.domain = (lo, hi);
        self
    }

    pub fn truncated(mut self, yes: bool) -> Self {
        self.truncated = yes;
        self
    }

    /// Adds `extra` to the potential.
    pub fn plus_potential(mut self, extra: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        let base = self.potential.clone();
        self.potential = Arc::new(move |x| base(x) + extra(x));
        self
    }

    pub fn shifted(self, c: f64) -> Self {
        if c == 0.0 {
            self
        } else {
            self.plus_potential(move |_| c)
        }
    }
}

/// Cell-centred finite-volume discretization.
#[derive(Debug, Clone)]
pub struct Discretization {
    pub grid: Vec<f64>,
    pub h: f64,
    /// Weight at the cell centres.
    pub weights: Vec<f64>,
    /// `W^{1/2} H W^{−1/2}`, symmetric.
    pub matrix: Tridiagonal,
}

impl Discretization {
    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// The untransformed operator `H = W^{−1/2} H̃ W^{1/2}` on nodal values.
    pub fn apply_raw(&self, f: &[f64]) -> Vec<f64> {
        let g: Vec<f64> = f.iter().zip(&self.weights).map(|(v, w)| v * w.sqrt()).collect();
        self.matrix
            .apply(&g)
            .iter()
            .zip(&self.weights)
            .map(|(v, w)| v / w.sqrt())
            .collect()
    }

    /// Midpoint quadrature of `f g w`.
    pub fn weighted_inner(&self, f: &[f64], g: &[f64]) -> f64 {
        self.h
            * f.iter()
                .zip(g)
                .zip(&self.weights)
                .map(|((a, b), w)| a * b * w)
                .sum::<f64>()
    }

    pub fn lowest(&self, k: usize) -> Vec<f64> {
        self.matrix.lowest_eigenvalues(k)
    }

    /// Eigenvectors mapped back to amplitudes normalized in the weighted product.
    pub fn eigenfunctions(&self) -> (Vec<f64>, Vec<Vec<f64>>) {
        let (vals, vecs) = self.matrix.eigenpairs();
        let funcs = (0..self.len())
            .map(|k| {
                let f: Vec<f64> = (0..self.len()).map(|i| vecs[(i, k)] / self.weights[i].sqrt()).collect();
                let norm = self.weighted_inner(&f, &f).sqrt();
                f.into_iter().map(|v| v / norm).collect()
            })
            .collect();
        (vals.iter().copied().collect(), funcs)
    }
}

pub fn discretize_1d(op: &ReducedOperator1D, n: usize) -> Result<Discretization> {
    if n < 16 {
        return Err(Error::InvalidArgument(format!(
            "grid needs at least 16 points, got {n}"
        )));
    }
    let (lo, hi) = op.domain;
    if !(lo.is_finite() && hi.is_finite() && hi > lo) {
        return Err(Error::DomainError(format!("invalid interval [{lo}, {hi}]")));
    }
    if !(op.kinetic > 0.0 && op.kinetic.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "kinetic coefficient must be positive, got {}",
            op.kinetic
        )));
    }
    let h = (hi - lo) / n as f64;
    let c = op.kinetic / (h * h);
    let grid: Vec<f64> = (0..n).map(|i| lo + (i as f64 + 0.5) * h).collect();
    let faces: Vec<f64> = (0..=n).map(|i| (op.weight)(lo + i as f64 * h)).collect();
    let weights: Vec<f64> = grid.iter().map(|&x| (op.weight)(x)).collect();

    for (i, &w) in weights.iter().enumerate() {
        if !(w > 0.0 && w.is_finite()) {
            return Err(Error::DomainError(format!("weight {w} at interior point {}", grid[i])));
        }
    }
    for (i, &w) in faces.iter().enumerate().take(n).skip(1) {
        if !(w > 0.0 && w.is_finite()) {
            return Err(Error::DomainError(format!(
                "weight {w} at interior point {}",
                lo + i as f64 * h
            )));
        }
    }
    for (end, &w) in [faces[0], faces[n]].iter().enumerate() {
        if !(w >= 0.0 && w.is_finite()) {
            return Err(Error::DomainError(format!(
                "weight {w} at endpoint {}",
                if end == 0 { lo } else { hi }
            )));
        }
    }

    let mut diag = Vec::with_capacity(n);
    for i in 0..n {
        let v = (op.potential)(grid[i]);
        if !v.is_finite() {
            return Err(Error::DomainError(format!("potential {v} at {}", grid[i])));
        }
        // Interior faces carry the flux; a Dirichlet wall mirrors a ghost cell
        // at distance h/2 from the face.
        let left = if i > 0 {
            faces[i]
        } else {
            match op.boundary.0 {
                Boundary::Dirichlet => 2.0 * faces[0],
                Boundary::NeumannRegular => 0.0,
            }
        };
        let right = if i + 1 < n {
            faces[i + 1]
        } else {
            match op.boundary.1 {
                Boundary::Dirichlet => 2.0 * faces[n],
                Boundary::NeumannRegular => 0.0,
            }
        };
        diag.push(c * (left + right) / weights[i] + v);
    }
    let off: Vec<f64> = (0..n - 1)
        .map(|i| -c * faces[i + 1] / (weights[i] * weights[i + 1]).sqrt())
        .collect();
    Ok(Discretization {
        grid,
        h,
        weights,
        matrix: Tridiagonal::new(diag, off)?,
    })
}

/// Grid and box refinement settings for [`solve_levels`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub grid_points: usize,
    pub levels: usize,
    pub tolerance: f64,
    /// Changes are measured relative to `max(|E|, energy_floor)`.
    pub energy_floor: f64,
    /// Only levels below this value are reported.
    pub ceiling: Option<f64>,
}

impl SolveOptions {
    pub fn new(grid_points: usize, levels: usize) -> Self {
        Self {
            grid_points,
            levels,
            tolerance: 1e-3,
            energy_floor: 1e-12,
            ceiling: None,
        }
    }
}

/// Lowest levels on `N` points, checked against `2N` points and, for truncated
/// operators, against a box 1.5 times longer at the same spacing.
pub fn solve_levels(op: &ReducedOperator1D, channel: &str, opts: &SolveOptions) -> Result<Spectrum> {
    let n = opts.grid_points;
    let coarse = discretize_1d(op, n)?.lowest(opts.levels);
    let fine = discretize_1d(op, 2 * n)?.lowest(opts.levels);
    let wide = if op.truncated {
        let (lo, hi) = op.domain;
        let longer = op.clone().with_domain(lo, lo + 1.5 * (hi - lo));
        Some(discretize_1d(&longer, n + n / 2)?.lowest(opts.levels))
    } else {
        None
    };
    let levels = fine
        .iter()
        .enumerate()
        .filter(|(_, &e)| opts.ceiling.is_none_or(|c| e < c))
        .map(|(k, &e)| {
            let scale = e.abs().max(opts.energy_floor);
            let mut change = (e - coarse[k]).abs() / scale;
            if let Some(w) = &wide {
                change = change.max((w[k] - coarse[k]).abs() / scale);
            }
            Level {
                energy: e,
                quantum_numbers: vec![k as i64],
                change,
                converged: change <= opts.tolerance,
            }
        })
        .collect();
    Ok(Spectrum::new(channel, levels, 2 * n, op.domain, opts.tolerance))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn particle_in_a_box() {
        let (hbar, mu, l) = (1.0, 0.5, 2.0);
        let op = ReducedOperator1D::new(
            Variable::Dilatation,
            hbar * hbar / (2.0 * mu),
            |_| 1.0,
            |_| 0.0,
            (0.0, l),
        );
        let d = discretize_1d(&op, 2000).unwrap();
        for (k, e) in d.lowest(5).iter().enumerate() {
            let kk = (k + 1) as f64;
            let exact = hbar * hbar * PI * PI * kk * kk / (2.0 * mu * l * l);
            assert!((e - exact).abs() / exact < 1e-5, "{k}: {e} vs {exact}");
        }
    }

    #[test]
    fn harmonic_dilatation_channel() {
        // −¼∂² + ½q² ⇒ ω = 1/√2.
        let op = ReducedOperator1D::new(Variable::Dilatation, 0.25, |_| 1.0, |q| 0.5 * q * q, (-12.0, 12.0));
        let d = discretize_1d(&op, 2000).unwrap();
        let omega = 0.5_f64.sqrt();
        for (k, e) in d.lowest(5).iter().enumerate() {
            let exact = omega * (k as f64 + 0.5);
            assert!((e - exact).abs() / exact < 1e-4);
        }
    }

    #[test]
    fn transformed_matrix_is_symmetric_and_weighted_product_hermitian() {
        let op = ReducedOperator1D::new(
            Variable::Shear,
            1.0,
            |x: f64| x.sinh(),
            |x: f64| 0.3 / x.powi(2) - 1.0 / (x / 2.0).cosh().powi(2),
            (0.0, 10.0),
        );
        let d = discretize_1d(&op, 300).unwrap();
        let dense = d.matrix.to_dense();
        assert!((&dense - dense.transpose()).amax() <= 1e-12);
        let f: Vec<f64> = d.grid.iter().map(|x| (x * 1.3).sin() * (-x).exp()).collect();
        let g: Vec<f64> = d.grid.iter().map(|x| x.cos() / (1.0 + x * x)).collect();
        let lhs = d.weighted_inner(&f, &d.apply_raw(&g));
        let rhs = d.weighted_inner(&d.apply_raw(&f), &g);
        assert!((lhs - rhs).abs() <= 1e-10 * lhs.abs().max(1.0));
    }

    #[test]
    fn eigenfunctions_are_orthonormal() {
        let op = ReducedOperator1D::new(Variable::Radius, 0.5, |r: f64| r, |r| r * r, (0.0, 6.0))
            .with_boundary(Boundary::NeumannRegular, Boundary::Dirichlet);
        let d = discretize_1d(&op, 200).unwrap();
        let (_, funcs) = d.eigenfunctions();
        for a in 0..6 {
            for b in 0..6 {
                let ip = d.weighted_inner(&funcs[a], &funcs[b]);
                let expected = if a == b { 1.0 } else { 0.0 };
                assert!((ip - expected).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn zero_interior_weight_is_a_domain_error() {
        let op = ReducedOperator1D::new(Variable::Shear, 1.0, |x: f64| x.sinh().abs(), |_| 0.0, (-1.0, 1.0));
        assert!(matches!(discretize_1d(&op, 64), Err(Error::DomainError(_))));
        assert!(matches!(discretize_1d(&op, 8), Err(Error::InvalidArgument(_))));
    }
}
