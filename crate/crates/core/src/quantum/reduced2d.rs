use crate::dynamics::InertiaModel;
use crate::error::{Error, Result};
use crate::quantum::{
    discretize_1d, solve_levels, Boundary, Channel2, ReducedOperator1D, SolveOptions, Spectrum, Variable,
};

/// Shear and dilatation operators of one planar channel.
#[derive(Debug, Clone)]
pub struct Reduced2D {
    pub channel: Channel2,
    /// `−(ħ²/α)D_λ + V_cfg + shift` on `x ∈ (0, x_max)` with weight `sh x`.
    pub shear: ReducedOperator1D,
    /// `−ħ²/(4(α + 2B)) ∂²_q̄`.
    pub dilatation: ReducedOperator1D,
    /// Bottom of the shear continuum, `ħ²/(4α) + shift`.
    pub threshold: f64,
    pub shift: f64,
}

/// `(α, α + 2B, spin shift)` for the invariant models in two dimensions.
fn planar_constants(model: &InertiaModel, ch: Channel2, hbar: f64) -> Result<(f64, f64, f64)> {
    model.validate(2)?;
    let (i, a, b) = model.invariant_constants().ok_or_else(|| {
        Error::InvalidModel(
            "planar shear reduction needs an affinely invariant model; use the Q± solvers for d'Alembert".into(),
        )
    })?;
    let alpha = i + a;
    let dil = alpha + 2.0 * b;
    if alpha <= 0.0 || dil <= 0.0 {
        return Err(Error::InvalidModel(format!(
            "reduced kinetic operator is not elliptic (α = {alpha}, α + 2B = {dil})"
        )));
    }
    let label = match model {
        InertiaModel::MetricAffine { .. } => ch.m as f64,
        InertiaModel::AffineMetric { .. } => ch.n as f64,
        _ => 0.0,
    };
    let shift = if i == 0.0 {
        0.0
    } else {
        i * hbar * hbar * label * label / (i * i - a * a)
    };
    Ok((alpha, dil, shift))
}

/// Default half-line for the shear variable.
pub const DEFAULT_SHEAR_BOX: f64 = 40.0;
/// Default half-width for the dilatation variable.
pub const DEFAULT_DILATATION_BOX: f64 = 20.0;

pub fn reduced_kinetic_2d(model: &InertiaModel, channel: Channel2, hbar: f64) -> Result<Reduced2D> {
    if !(hbar > 0.0 && hbar.is_finite()) {
        return Err(Error::InvalidArgument(format!("ħ must be positive, got {hbar}")));
    }
    let (alpha, dil, shift) = planar_constants(model, channel, hbar)?;
    let (m, n) = (channel.m as f64, channel.n as f64);
    let rep = hbar * hbar * (n - m) * (n - m) / (16.0 * alpha);
    let att = hbar * hbar * (n + m) * (n + m) / (16.0 * alpha);
    let v_cfg = move |x: f64| {
        let h = 0.5 * x;
        let r = if rep == 0.0 { 0.0 } else { rep / h.sinh().powi(2) };
        r - att / h.cosh().powi(2) + shift
    };
    let shear = ReducedOperator1D::new(
        Variable::Shear,
        hbar * hbar / alpha,
        |x: f64| x.sinh().abs(),
        v_cfg,
        (0.0, DEFAULT_SHEAR_BOX),
    )
    .with_boundary(Boundary::NeumannRegular, Boundary::Dirichlet)
    .truncated(true);
    let dilatation = ReducedOperator1D::new(
        Variable::Dilatation,
        hbar * hbar / (4.0 * dil),
        |_| 1.0,
        |_| 0.0,
        (-DEFAULT_DILATATION_BOX, DEFAULT_DILATATION_BOX),
    );
    Ok(Reduced2D {
        channel,
        shear,
        dilatation,
        threshold: hbar * hbar / (4.0 * alpha) + shift,
        shift,
    })
}

/// Settings for [`bound_state_count`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundStateOptions {
    pub hbar: f64,
    pub x_max: f64,
    pub grid_points: usize,
    pub tolerance: f64,
    /// Upper bound on the number of levels examined.
    pub max_levels: usize,
}

impl Default for BoundStateOptions {
    fn default() -> Self {
        Self {
            hbar: 1.0,
            x_max: DEFAULT_SHEAR_BOX,
            grid_points: 4000,
            tolerance: 1e-3,
            max_levels: 16,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BoundStates {
    pub channel: Channel2,
    pub count: usize,
    pub threshold: f64,
    /// The counted levels with their refinement record.
    pub spectrum: Spectrum,
}

/// Levels of the geodetic shear channel below the continuum edge.
///
/// The count is taken on `N` and `2N` points and on a 1.5 times longer box;
/// disagreement, or a counted level moving by more than the tolerance
/// relative to `max(|E|, ħ²/4α)`, is reported as `Unconverged`.
pub fn bound_state_count(model: &InertiaModel, channel: Channel2, opts: &BoundStateOptions) -> Result<BoundStates> {
    let red = reduced_kinetic_2d(model, channel, opts.hbar)?;
    let shear = red.shear.clone().with_domain(0.0, opts.x_max);
    let thr = red.threshold;
    let counts = [
        discretize_1d(&shear, opts.grid_points)?.matrix.count_below(thr),
        discretize_1d(&shear, 2 * opts.grid_points)?.matrix.count_below(thr),
        discretize_1d(
            &shear.clone().with_domain(0.0, 1.5 * opts.x_max),
            opts.grid_points + opts.grid_points / 2,
        )?
        .matrix
        .count_below(thr),
    ];
    if counts.iter().any(|&c| c != counts[0]) {
        return Err(Error::Unconverged(format!(
            "channel ({}, {}): counts {:?} under grid and box refinement",
            channel.m, channel.n, counts
        )));
    }
    let count = counts[0].min(opts.max_levels);
    let mut so = SolveOptions::new(opts.grid_points, count);
    so.tolerance = opts.tolerance;
    so.energy_floor = (thr - red.shift).abs();
    let label = format!("m={} n={}", channel.m, channel.n);
    let spectrum = if count == 0 {
        Spectrum::new(label, Vec::new(), 2 * opts.grid_points, shear.domain, opts.tolerance)
    } else {
        solve_levels(&shear, &label, &so)?
    };
    if let Some(bad) = spectrum.levels.iter().find(|l| !l.converged) {
        return Err(Error::Unconverged(format!(
            "channel ({}, {}): level {} changed by {:.3e} relative",
            channel.m, channel.n, bad.energy, bad.change
        )));
    }
    Ok(BoundStates {
        channel,
        count,
        threshold: thr,
        spectrum,
    })
}

/// Closed-form bound levels of the geodetic shear channel.
///
/// In `y = x/2` the channel is a hyperbolic Pöschl–Teller problem, giving
/// `E_k = ħ²/(4α) − ħ²(min(|m|,|n|) − 1 − 2k)²/(4α)` for `mn > 0` and
/// `2k < min(|m|,|n|) − 1`, plus the constant shift. Channels with
/// `mn ≤ 0` or `min(|m|,|n|) = 1` have no level below the continuum.
pub fn exact_shear_levels(model: &InertiaModel, channel: Channel2, hbar: f64) -> Result<Vec<f64>> {
    let (alpha, _, shift) = planar_constants(model, channel, hbar)?;
    if channel.m * channel.n <= 0 {
        return Ok(Vec::new());
    }
    let lead = channel.m.abs().min(channel.n.abs()) - 1;
    Ok((0..)
        .map(|k| lead - 2 * k)
        .take_while(|&d| d > 0)
        .map(|d| hbar * hbar * (1.0 - (d * d) as f64) / (4.0 * alpha) + shift)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn aff() -> InertiaModel {
        InertiaModel::AffineAffine { m: 1.0, a: 1.0, b: 0.5 }
    }

    #[test]
    fn free_channel_has_no_centrifugal_term() {
        let red = reduced_kinetic_2d(&aff(), Channel2::new(0, 0), 1.0).unwrap();
        for x in [0.1, 1.0, 7.0] {
            assert_eq!((red.shear.potential)(x), 0.0);
        }
    }

    #[test]
    fn substituted_centrifugal_term() {
        let red = reduced_kinetic_2d(&aff(), Channel2::new(2, 1), 1.0).unwrap();
        for x in [0.3_f64, 1.7, 4.0] {
            let h = x / 2.0;
            let expected = 1.0 / (16.0 * h.sinh().powi(2)) - 9.0 / (16.0 * h.cosh().powi(2));
            assert!(((red.shear.potential)(x) - expected).abs() < 1e-14);
        }
        assert!((red.dilatation.kinetic - 1.0 / 8.0).abs() < 1e-15);
    }

    #[test]
    fn mixed_models_shift_by_a_constant() {
        let (i, a, b) = (3.0, 1.0, 0.2);
        let ch = Channel2::new(2, -1);
        let ma = reduced_kinetic_2d(&InertiaModel::MetricAffine { m: 1.0, i, a, b }, ch, 1.0).unwrap();
        let am = reduced_kinetic_2d(&InertiaModel::AffineMetric { m: 1.0, i, a, b }, ch, 1.0).unwrap();
        let base = reduced_kinetic_2d(&InertiaModel::AffineAffine { m: 1.0, a: i + a, b }, ch, 1.0).unwrap();
        let x = 1.3;
        assert!(((ma.shear.potential)(x) - (base.shear.potential)(x) - i * 4.0 / (i * i - a * a)).abs() < 1e-14);
        assert!(((am.shear.potential)(x) - (base.shear.potential)(x) - i / (i * i - a * a)).abs() < 1e-14);
        assert!((ma.dilatation.kinetic - 1.0 / (4.0 * (i + a + 2.0 * b))).abs() < 1e-15);
    }

    #[test]
    fn dalembert_is_rejected() {
        let model = InertiaModel::DAlembert {
            m: 1.0,
            j: crate::linalg::identity(2),
        };
        assert!(matches!(
            reduced_kinetic_2d(&model, Channel2::new(1, 1), 1.0),
            Err(Error::InvalidModel(_))
        ));
    }

    #[test]
    fn grid_levels_match_closed_form() {
        let opts = BoundStateOptions::default();
        for ch in [Channel2::new(2, 2), Channel2::new(3, 4), Channel2::new(-4, -4)] {
            let bs = bound_state_count(&aff(), ch, &opts).unwrap();
            let exact = exact_shear_levels(&aff(), ch, 1.0).unwrap();
            assert_eq!(bs.count, exact.len(), "{ch:?}");
            for (e, x) in bs.spectrum.energies().iter().zip(&exact) {
                assert!((e - x).abs() < 1e-3 * x.abs().max(0.25), "{ch:?}: {e} vs {x}");
            }
        }
    }

    #[test]
    fn scattering_and_free_channels_have_no_levels() {
        let opts = BoundStateOptions {
            grid_points: 2000,
            ..Default::default()
        };
        for ch in [Channel2::new(1, -1), Channel2::new(0, 0), Channel2::new(2, 1)] {
            assert_eq!(bound_state_count(&aff(), ch, &opts).unwrap().count, 0, "{ch:?}");
        }
    }

    #[test]
    fn spectra_respect_channel_symmetries() {
        let d = |ch| {
            discretize_1d(&reduced_kinetic_2d(&aff(), ch, 1.0).unwrap().shear, 800)
                .unwrap()
                .lowest(4)
        };
        let base = d(Channel2::new(3, 1));
        for other in [Channel2::new(1, 3), Channel2::new(-3, -1), Channel2::new(-1, -3)] {
            for (a, b) in base.iter().zip(d(other)) {
                assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
            }
        }
    }
}
