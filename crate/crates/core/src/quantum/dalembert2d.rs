//! Separable planar d'Alembert problems in the `Q±` and `(r, φ)` charts,
//! `Q⁺ = r cos φ`, `Q⁻ = r sin φ`.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::quantum::{
    solve_levels, Boundary, Channel2, Level, ReducedOperator1D, ScalarFn, SolveOptions, Spectrum, Variable,
};

/// Grid on `(0, extent)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialGrid {
    pub points: usize,
    pub extent: f64,
}

/// Grid on `(0, upper)`; `upper = π/2` covers the quadrant `Q± > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularGrid {
    pub points: usize,
    pub upper: f64,
}

impl Default for AngularGrid {
    fn default() -> Self {
        Self {
            points: 2000,
            upper: FRAC_PI_2,
        }
    }
}

fn check(inertia: f64, hbar: f64) -> Result<()> {
    if !(inertia > 0.0 && inertia.is_finite()) {
        return Err(Error::InvalidModel(format!("inertia must be positive, got {inertia}")));
    }
    if !(hbar > 0.0 && hbar.is_finite()) {
        return Err(Error::InvalidArgument(format!("ħ must be positive, got {hbar}")));
    }
    Ok(())
}

/// `H± = −(ħ²/2I)(∂² + (1/Q)∂) + ħ²(m∓n)²/(8IQ²) + V±(Q)`.
pub fn qpm_operator(
    channel: Channel2,
    sign: f64,
    inertia: f64,
    hbar: f64,
    v: ScalarFn,
    grid: RadialGrid,
) -> ReducedOperator1D {
    let l = channel.m as f64 - sign * channel.n as f64;
    let cf = hbar * hbar * l * l / (8.0 * inertia);
    let variable = if sign > 0.0 { Variable::QPlus } else { Variable::QMinus };
    ReducedOperator1D::new(
        variable,
        hbar * hbar / (2.0 * inertia),
        |q| q,
        move |q| if cf == 0.0 { v(q) } else { cf / (q * q) + v(q) },
        (0.0, grid.extent),
    )
    .with_boundary(Boundary::NeumannRegular, Boundary::Dirichlet)
    .truncated(true)
}

/// Independent `Q⁺` and `Q⁻` spectra; total levels are sums `E₊ + E₋`.
pub fn dalembert_qpm_solver(
    channel: Channel2,
    inertia: f64,
    hbar: f64,
    v_plus: ScalarFn,
    v_minus: ScalarFn,
    grid: RadialGrid,
    levels: usize,
) -> Result<(Spectrum, Spectrum)> {
    check(inertia, hbar)?;
    let opts = SolveOptions::new(grid.points, levels);
    let label = |s: &str| format!("m={} n={} {s}", channel.m, channel.n);
    let plus = solve_levels(
        &qpm_operator(channel, 1.0, inertia, hbar, v_plus, grid),
        &label("Q+"),
        &opts,
    )?;
    let minus = solve_levels(
        &qpm_operator(channel, -1.0, inertia, hbar, v_minus, grid),
        &label("Q-"),
        &opts,
    )?;
    Ok((plus, minus))
}

/// Lowest `count` sums `E₊(k₊) + E₋(k₋)` labelled `(k₊, k₋)`.
pub fn combine_qpm(plus: &Spectrum, minus: &Spectrum, count: usize) -> Spectrum {
    let mut all = Vec::new();
    for a in &plus.levels {
        for b in &minus.levels {
            all.push(Level {
                energy: a.energy + b.energy,
                quantum_numbers: vec![a.quantum_numbers[0], b.quantum_numbers[0]],
                change: a.change.max(b.change),
                converged: a.converged && b.converged,
            });
        }
    }
    all.sort_by(|x, y| x.energy.total_cmp(&y.energy));
    all.truncate(count);
    Spectrum::new(
        plus.channel.replace(" Q+", ""),
        all,
        plus.grid_points,
        plus.domain,
        plus.tolerance,
    )
}

/// Angular operator `−(ħ²/2I)(∂² + 2 ctg 2φ ∂) + (ħ²/2I)(m² + 2mn cos 2φ + n²)/sin² 2φ + V_φ`.
pub fn angular_operator(
    channel: Channel2,
    inertia: f64,
    hbar: f64,
    v_phi: ScalarFn,
    grid: AngularGrid,
) -> ReducedOperator1D {
    let (m, n) = (channel.m as f64, channel.n as f64);
    let k = hbar * hbar / (2.0 * inertia);
    ReducedOperator1D::new(
        Variable::Angle,
        k,
        |p: f64| (2.0 * p).sin().abs(),
        move |p: f64| {
            let num = m * m + 2.0 * m * n * (2.0 * p).cos() + n * n;
            let c = if num == 0.0 {
                0.0
            } else {
                k * num / (2.0 * p).sin().powi(2)
            };
            c + v_phi(p)
        },
        (0.0, grid.upper),
    )
}

/// Radial operator `−(ħ²/2I)(∂² + (3/r)∂) + E_φ/r² + V_r`.
pub fn radial_operator(e_phi: f64, inertia: f64, hbar: f64, v_r: ScalarFn, grid: RadialGrid) -> ReducedOperator1D {
    ReducedOperator1D::new(
        Variable::Radius,
        hbar * hbar / (2.0 * inertia),
        |r: f64| r * r * r,
        move |r| if e_phi == 0.0 { v_r(r) } else { e_phi / (r * r) + v_r(r) },
        (0.0, grid.extent),
    )
    .with_boundary(Boundary::NeumannRegular, Boundary::Dirichlet)
    .truncated(true)
}

/// Angular levels first, then radial problems with `E_φ/r²`; levels are
/// labelled `(m, n, k, μ)` with `k` angular and `μ` radial.
#[allow(clippy::too_many_arguments)]
pub fn dalembert_polar_solver(
    channel: Channel2,
    inertia: f64,
    hbar: f64,
    v_r: ScalarFn,
    v_phi: ScalarFn,
    angular: AngularGrid,
    radial: RadialGrid,
    levels: usize,
) -> Result<Spectrum> {
    check(inertia, hbar)?;
    if !(angular.upper > 0.0 && angular.upper <= FRAC_PI_2) {
        return Err(Error::DomainError(format!(
            "angular interval (0, {}) outside (0, π/2]",
            angular.upper
        )));
    }
    let label = format!("m={} n={}", channel.m, channel.n);
    let ang = solve_levels(
        &angular_operator(channel, inertia, hbar, v_phi, angular),
        &label,
        &SolveOptions::new(angular.points, levels),
    )?;
    let mut all = Vec::new();
    for (k, a) in ang.levels.iter().enumerate() {
        let rad = solve_levels(
            &radial_operator(a.energy, inertia, hbar, v_r.clone(), radial),
            &label,
            &SolveOptions::new(radial.points, levels),
        )?;
        for (mu, r) in rad.levels.iter().enumerate() {
            all.push(Level {
                energy: r.energy,
                quantum_numbers: vec![channel.m as i64, channel.n as i64, k as i64, mu as i64],
                change: a.change.max(r.change),
                converged: a.converged && r.converged,
            });
        }
    }
    all.sort_by(|x, y| x.energy.total_cmp(&y.energy));
    all.truncate(levels);
    Ok(Spectrum::new(label, all, 2 * radial.points, (0.0, radial.extent), 1e-3))
}

/// `E_k = ħΩ(2k + 1 + ν)`, `Ω = √(2c/I)`, `ν = √((m∓n)²/4 + 2Ia/ħ²)` for
/// `V = a/Q² + cQ²` in the `Q±` channel selected by `sign`.
pub fn qpm_oracle(channel: Channel2, sign: f64, inertia: f64, hbar: f64, a: f64, c: f64, k: usize) -> f64 {
    let l = channel.m as f64 - sign * channel.n as f64;
    let nu = (l * l / 4.0 + 2.0 * inertia * a / (hbar * hbar)).sqrt();
    let omega = (2.0 * c / inertia).sqrt();
    hbar * omega * (2.0 * k as f64 + 1.0 + nu)
}
