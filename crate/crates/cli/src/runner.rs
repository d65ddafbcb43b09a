//! Executes validated scenarios into result tables.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_4;
use std::sync::Arc;

use affine_core::dynamics::{
    classify_2d, geodesic_exponential, integrate_with, legendre, Boundedness, InertiaModel, IntegrationError,
    IntegrationOptions, PlanarState, Potential, System, Trajectory, Velocities,
};
use affine_core::geometry::deformation_invariants;
use affine_core::linalg::{frobenius, metric_transpose};
use affine_core::quantum::{
    bound_state_count, combine_qpm, dalembert_polar_solver, dalembert_qpm_solver, reduced_kinetic_3d, AngularGrid,
    BoundStateOptions, Channel2, Channel3, Grid3, RadialGrid, ScalarFn, Spectrum,
};
use affine_core::{Mat, MetricPair, PhasePoint, Vector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::{canonical_json, config_hash, PotentialSpec, ScenarioConfig, ScenarioKind};
use crate::error::{CliError, CliResult};
use crate::table::{Cell, Column, ColumnType, ResultTable};

use ColumnType::{Bool, Str, F64, I64};

pub fn provenance(cfg: &ScenarioConfig) -> BTreeMap<String, String> {
    BTreeMap::from([
        ("kind".into(), cfg.kind.as_str().into()),
        ("seed".into(), cfg.seed.to_string()),
        ("config_hash".into(), config_hash(cfg)),
        ("config".into(), canonical_json(cfg)),
        ("core_version".into(), affine_core::VERSION.into()),
        ("cli_version".into(), env!("CARGO_PKG_VERSION").into()),
    ])
}

fn columns(spec: &[(&str, ColumnType)]) -> Vec<Column> {
    spec.iter().map(|(n, t)| Column::new(*n, *t)).collect()
}

/// Module errors of one work item, labelled for the failure table.
struct Failure {
    item: String,
    message: String,
}

type ItemResult<T> = Result<T, Failure>;

fn fail(item: impl Into<String>) -> impl FnOnce(affine_core::Error) -> Failure {
    let item = item.into();
    move |e| Failure {
        item,
        message: e.to_string(),
    }
}

/// Table of failed work items; exported in place of the result.
pub fn failure_table(cfg: &ScenarioConfig, failures: &[(String, String)]) -> ResultTable {
    let mut prov = provenance(cfg);
    prov.insert("status".into(), "failed".into());
    let mut t = ResultTable::new(columns(&[("item", Str), ("error", Str)]), prov);
    for (item, msg) in failures {
        t.push(vec![item.as_str().into(), msg.as_str().into()]);
    }
    t
}

/// Successful table, or the failure table when any work item errs.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<ResultTable, ResultTable> {
    let out = match cfg.kind {
        ScenarioKind::ClassicalTrajectory => classical(cfg),
        ScenarioKind::GeodesicCompare => geodesic(cfg),
        ScenarioKind::ConservationAudit => conservation(cfg),
        ScenarioKind::Boundedness2D => boundedness(cfg),
        ScenarioKind::Spectrum2D => spectrum_2d(cfg),
        ScenarioKind::SpectrumQpm => spectrum_qpm(cfg),
        ScenarioKind::SpectrumPolar => spectrum_polar(cfg),
        ScenarioKind::Operator3DCheck => operator_3d(cfg),
    };
    out.map_err(|fs| failure_table(cfg, &fs.into_iter().map(|f| (f.item, f.message)).collect::<Vec<_>>()))
}

/// Runs items in parallel, keeping input order and collecting every failure.
fn gather<T: Send>(items: Vec<ItemResult<T>>) -> Result<Vec<T>, Vec<Failure>> {
    let mut ok = Vec::new();
    let mut bad = Vec::new();
    for r in items {
        match r {
            Ok(v) => ok.push(v),
            Err(f) => bad.push(f),
        }
    }
    if bad.is_empty() {
        Ok(ok)
    } else {
        Err(bad)
    }
}

fn setup_failure(e: CliError) -> Vec<Failure> {
    vec![Failure {
        item: "setup".into(),
        message: e.to_string(),
    }]
}

/// Independent stream per sample so results do not depend on scheduling.
fn sample_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn uniform(rng: &mut ChaCha8Rng, n: usize, m: usize, scale: f64) -> Mat {
    Mat::from_fn(n, m, |_, _| rng.random_range(-scale..scale))
}

fn mat(rows: &[Vec<f64>]) -> Mat {
    Mat::from_fn(rows.len(), rows.len(), |i, j| rows[i][j])
}

struct Prepared {
    system: System,
    model: InertiaModel,
    metrics: MetricPair,
}

fn prepare(cfg: &ScenarioConfig) -> CliResult<Prepared> {
    let model = cfg.model.build(cfg.dim)?;
    let metrics = cfg.metric_pair()?;
    let potential = cfg.potential.build(cfg.dim, "potential")?;
    let system = System::new(model.clone(), potential, metrics.clone())?;
    Ok(Prepared { system, model, metrics })
}

/// Configured initial data; gaps are filled with `φ = 1 + U(±0.15)`,
/// `x ~ U(±0.5)`, `ẋ, φ̇ ~ U(±0.3)`.
fn initial_point(cfg: &ScenarioConfig, p: &Prepared, rng: &mut ChaCha8Rng) -> affine_core::Result<PhasePoint> {
    let n = cfg.dim;
    let init = cfg.initial.clone().unwrap_or_default();
    let phi = init
        .phi
        .as_deref()
        .map(mat)
        .unwrap_or_else(|| Mat::identity(n, n) + uniform(rng, n, n, 0.15));
    let x = init
        .x
        .map(Vector::from_vec)
        .unwrap_or_else(|| uniform(rng, n, 1, 0.5).column(0).into_owned());
    let xdot = init
        .xdot
        .map(Vector::from_vec)
        .unwrap_or_else(|| uniform(rng, n, 1, 0.3).column(0).into_owned());
    let phidot = init
        .phidot
        .as_deref()
        .map(mat)
        .unwrap_or_else(|| uniform(rng, n, n, 0.3));
    let (pm, pi) = legendre(&p.model, &p.metrics, &phi, &Velocities { xdot, phidot })?;
    PhasePoint::new(x, phi, pm, pi)
}

fn options(cfg: &ScenarioConfig, record_every: usize) -> IntegrationOptions {
    let nm = &cfg.numerics;
    IntegrationOptions::new(nm.dt.unwrap_or(1e-3), nm.steps.unwrap_or(10_000)).record_every(record_every)
}

fn run(
    sys: &System,
    z: &PhasePoint,
    cfg: &ScenarioConfig,
    opts: &IntegrationOptions,
) -> affine_core::Result<Trajectory> {
    let scheme = cfg.numerics.scheme.expect("filled by defaults");
    integrate_with(sys, z, scheme, opts).map_err(|e| match e {
        IntegrationError::Diverged { step, reason, .. } => {
            affine_core::Error::NumericalFailure(format!("diverged at step {step}: {reason}"))
        }
        IntegrationError::Failed(e) => e,
    })
}

fn spin_and_vorticity(z: &PhasePoint, metrics: &MetricPair) -> (Mat, Mat) {
    let total = &z.x * z.p.transpose() + &z.phi * &z.pi;
    let sigma_hat = &z.pi * &z.phi;
    let spin = &total - metric_transpose(&total, metrics.g(), metrics.g_inv());
    let vort = &sigma_hat - metric_transpose(&sigma_hat, metrics.eta(), metrics.eta_inv());
    (spin, vort)
}

fn classical(cfg: &ScenarioConfig) -> Result<ResultTable, Vec<Failure>> {
    let p = prepare(cfg).map_err(setup_failure)?;
    let n = cfg.dim;
    let mut rng = sample_rng(cfg.seed, 0);
    let z0 = initial_point(cfg, &p, &mut rng).map_err(|e| vec![fail("initial")(e)])?;
    let traj = run(
        &p.system,
        &z0,
        cfg,
        &options(cfg, cfg.numerics.record_every.unwrap_or(1)),
    )
    .map_err(|e| vec![fail("trajectory")(e)])?;
    let mut spec: Vec<(String, ColumnType)> = vec![("t".into(), F64), ("qbar".into(), F64)];
    spec.extend((1..=n).map(|a| (format!("q{a}"), F64)));
    spec.extend((1..=n).map(|a| (format!("x{a}"), F64)));
    for c in [
        "energy",
        "spin_norm",
        "vorticity_norm",
        "energy_drift",
        "spin_drift",
        "vorticity_drift",
    ] {
        spec.push((c.into(), F64));
    }
    let mut table = ResultTable::new(
        spec.into_iter().map(|(a, t)| Column::new(a, t)).collect(),
        provenance(cfg),
    );
    let (s0, v0) = spin_and_vorticity(&z0, &p.metrics);
    let e0 = p.system.energy(&z0).map_err(|e| vec![fail("energy")(e)])?;
    let (mut de, mut ds, mut dv) = (0.0_f64, 0.0_f64, 0.0_f64);
    for (t, z) in traj.times.iter().zip(&traj.states) {
        let item = format!("t={t}");
        let q = deformation_invariants(&z.phi, &p.metrics).map_err(|e| vec![fail(&item)(e)])?;
        let e = p.system.energy(z).map_err(|e| vec![fail(&item)(e)])?;
        let (s, v) = spin_and_vorticity(z, &p.metrics);
        de = de.max((e - e0).abs() / if e0 != 0.0 { e0.abs() } else { 1.0 });
        ds = ds.max(frobenius(&(&s - &s0)) / frobenius(&s0).max(1.0));
        dv = dv.max(frobenius(&(&v - &v0)) / frobenius(&v0).max(1.0));
        let mut row: Vec<Cell> = vec![(*t).into(), q.mean().into()];
        row.extend(q.iter().map(|v| Cell::F64(*v)));
        row.extend(z.x.iter().map(|v| Cell::F64(*v)));
        row.extend([e, frobenius(&s), frobenius(&v), de, ds, dv].map(Cell::F64));
        table.push(row);
    }
    Ok(table)
}

fn random_gl_plus(rng: &mut ChaCha8Rng, n: usize) -> Mat {
    loop {
        let phi = Mat::identity(n, n) + uniform(rng, n, n, 0.5);
        if phi.determinant() > 0.05 {
            return phi;
        }
    }
}

fn geodesic(cfg: &ScenarioConfig) -> Result<ResultTable, Vec<Failure>> {
    let p = prepare(cfg).map_err(setup_failure)?;
    let n = cfg.dim;
    let samples = cfg.numerics.samples.unwrap_or(1);
    let opts = options(cfg, cfg.numerics.record_every.unwrap_or(1));
    let per_sample: Vec<ItemResult<Vec<Vec<Cell>>>> = (0..samples)
        .into_par_iter()
        .map(|s| {
            let item = format!("sample {s}");
            let mut rng = sample_rng(cfg.seed, s as u64);
            let init = cfg.initial.clone().unwrap_or_default();
            let phi0 = init
                .phi
                .as_deref()
                .map(mat)
                .unwrap_or_else(|| random_gl_plus(&mut rng, n));
            let omega = match init.phidot.as_deref() {
                Some(rows) => phi0.clone().try_inverse().expect("det φ > 0 checked") * mat(rows),
                None => uniform(&mut rng, n, n, 0.8),
            };
            let vel = Velocities {
                xdot: Vector::zeros(n),
                phidot: &phi0 * &omega,
            };
            let (pm, pi) = legendre(&p.model, &p.metrics, &phi0, &vel).map_err(fail(&item))?;
            let z0 = PhasePoint::new(Vector::zeros(n), phi0.clone(), pm, pi).map_err(fail(&item))?;
            let traj = run(&p.system, &z0, cfg, &opts).map_err(fail(&item))?;
            Ok(traj
                .times
                .iter()
                .zip(&traj.states)
                .map(|(t, z)| {
                    let exact = geodesic_exponential(&phi0, &omega, *t);
                    vec![Cell::I64(s as i64), Cell::F64(*t), Cell::F64((&z.phi - exact).amax())]
                })
                .collect())
        })
        .collect();
    let mut table = ResultTable::new(
        columns(&[("sample", I64), ("t", F64), ("max_abs_error", F64)]),
        provenance(cfg),
    );
    for rows in gather(per_sample)? {
        rows.into_iter().for_each(|r| table.push(r));
    }
    Ok(table)
}

fn conservation(cfg: &ScenarioConfig) -> Result<ResultTable, Vec<Failure>> {
    let p = prepare(cfg).map_err(setup_failure)?;
    let samples = cfg.numerics.samples.unwrap_or(1);
    let opts = options(cfg, usize::MAX);
    let reports = gather(
        (0..samples)
            .into_par_iter()
            .map(|s| {
                let item = format!("sample {s}");
                let mut rng = sample_rng(cfg.seed, s as u64);
                let z0 = initial_point(cfg, &p, &mut rng).map_err(fail(&item))?;
                Ok(run(&p.system, &z0, cfg, &opts).map_err(fail(&item))?.audit)
            })
            .collect(),
    )?;
    let with_deviator = reports.first().is_some_and(|r| r.deviator_drift.is_some());
    let mut spec = vec![
        ("sample", I64),
        ("initial_energy", F64),
        ("energy_drift", F64),
        ("spin_drift", F64),
        ("vorticity_drift", F64),
    ];
    if with_deviator {
        spec.push(("deviator_drift", F64));
    }
    let mut table = ResultTable::new(columns(&spec), provenance(cfg));
    for (s, r) in reports.iter().enumerate() {
        let mut row = vec![
            Cell::I64(s as i64),
            r.initial_energy.into(),
            r.energy_drift.into(),
            r.spin_drift.unwrap_or(0.0).into(),
            r.vorticity_drift.unwrap_or(0.0).into(),
        ];
        if with_deviator {
            row.push(r.deviator_drift.unwrap_or(0.0).into());
        }
        table.push(row);
    }
    Ok(table)
}

fn class_name(b: Boundedness) -> &'static str {
    match b {
        Boundedness::Bounded => "bounded",
        Boundedness::Unbounded => "unbounded",
        Boundedness::Marginal => "marginal",
    }
}

fn boundedness(cfg: &ScenarioConfig) -> Result<ResultTable, Vec<Failure>> {
    let p = prepare(cfg).map_err(setup_failure)?;
    let nm = &cfg.numerics;
    let mo = cfg.momenta.clone().unwrap_or_default();
    let cells: Vec<(f64, f64)> = mo
        .p_alpha
        .unwrap_or_default()
        .iter()
        .flat_map(|a| mo.p_beta.iter().flatten().map(move |b| (*a, *b)))
        .collect();
    let simulate = nm.simulate.unwrap_or(false);
    let (x0, escape) = (nm.x0.unwrap_or(1.5), nm.escape_radius.unwrap_or(20.0));
    let steps = nm.steps.unwrap_or(10_000);
    let chunk = 500.min(steps);
    let rows = gather(
        cells
            .par_iter()
            .map(|&(pa, pb)| {
                let mut row: Vec<Cell> = vec![pa.into(), pb.into(), class_name(classify_2d(pa, pb)).into()];
                if !simulate {
                    return Ok(row);
                }
                let item = format!("p_alpha={pa} p_beta={pb}");
                let st = PlanarState {
                    qbar: 0.0,
                    x: x0,
                    theta_l: 0.0,
                    theta_r: 0.0,
                    p_x: 0.0,
                    p_dil: 0.0,
                    p_alpha: pa,
                    p_beta: pb,
                };
                let mut z = st.to_phase_point().map_err(fail(&item))?;
                let (mut lo, mut hi) = (x0, x0);
                let mut done = 0;
                while done < steps && hi <= escape {
                    let k = chunk.min(steps - done);
                    let mut o = options(cfg, 1);
                    o.steps = k;
                    let traj = run(&p.system, &z, cfg, &o).map_err(fail(&item))?;
                    for s in &traj.states {
                        let q = deformation_invariants(&s.phi, &p.metrics).map_err(fail(&item))?;
                        lo = lo.min(q[1] - q[0]);
                        hi = hi.max(q[1] - q[0]);
                    }
                    z = traj.states.last().expect("non-empty").clone();
                    done += k;
                }
                row.extend([Cell::F64(lo), Cell::F64(hi), Cell::Bool(hi > escape)]);
                Ok(row)
            })
            .collect(),
    )?;
    let mut spec = vec![("p_alpha", F64), ("p_beta", F64), ("class", Str)];
    if simulate {
        spec.extend([("x_min", F64), ("x_max", F64), ("escaped", Bool)]);
    }
    let mut table = ResultTable::new(columns(&spec), provenance(cfg));
    rows.into_iter().for_each(|r| table.push(r));
    Ok(table)
}

fn channels(cfg: &ScenarioConfig) -> Vec<Channel2> {
    let spec = cfg.channels.clone().unwrap_or_default();
    spec.pairs().into_iter().map(|(m, n)| Channel2::new(m, n)).collect()
}

fn spectrum_2d(cfg: &ScenarioConfig) -> Result<ResultTable, Vec<Failure>> {
    let p = prepare(cfg).map_err(setup_failure)?;
    let nm = &cfg.numerics;
    let opts = BoundStateOptions {
        hbar: cfg.hbar,
        x_max: nm.domain.expect("filled")[1],
        grid_points: nm.grid_points.expect("filled"),
        tolerance: nm.tolerance.expect("filled"),
        max_levels: nm.levels.expect("filled"),
    };
    let per_channel = gather(
        channels(cfg)
            .par_iter()
            .map(|&ch| {
                let bs = bound_state_count(&p.model, ch, &opts).map_err(fail(format!("m={} n={}", ch.m, ch.n)))?;
                let (m, n, count) = (ch.m as i64, ch.n as i64, bs.count as i64);
                let mut rows = vec![vec![
                    m.into(),
                    n.into(),
                    count.into(),
                    (-1i64).into(),
                    bs.threshold.into(),
                    0.0.into(),
                    true.into(),
                ]];
                for (k, l) in bs.spectrum.levels.iter().take(bs.count).enumerate() {
                    rows.push(vec![
                        m.into(),
                        n.into(),
                        count.into(),
                        (k as i64).into(),
                        l.energy.into(),
                        l.change.into(),
                        l.converged.into(),
                    ]);
                }
                Ok(rows)
            })
            .collect(),
    )?;
    let mut table = ResultTable::new(
        columns(&[
            ("m", I64),
            ("n", I64),
            ("bound_states", I64),
            ("level", I64),
            ("energy", F64),
            ("change", F64),
            ("converged", Bool),
        ]),
        provenance(cfg),
    );
    per_channel.into_iter().flatten().for_each(|r| table.push(r));
    Ok(table)
}

fn inverse_square_plus_harmonic(s: f64, c: f64) -> ScalarFn {
    Arc::new(move |q: f64| s / (q * q) + c * q * q)
}

fn spectrum_rows(ch: Channel2, spec: &Spectrum) -> Vec<Vec<Cell>> {
    spec.levels
        .iter()
        .enumerate()
        .map(|(k, l)| {
            let qn = |i: usize| Cell::I64(l.quantum_numbers.get(i).copied().unwrap_or(-1));
            let (a, b) = if l.quantum_numbers.len() >= 4 {
                (qn(2), qn(3))
            } else {
                (qn(0), qn(1))
            };
            vec![
                Cell::I64(ch.m as i64),
                Cell::I64(ch.n as i64),
                Cell::I64(k as i64),
                a,
                b,
                l.energy.into(),
                l.change.into(),
                l.converged.into(),
            ]
        })
        .collect()
}

fn dalembert_spectrum(
    cfg: &ScenarioConfig,
    labels: [&str; 2],
    solve: impl Fn(Channel2) -> affine_core::Result<Spectrum> + Sync,
) -> Result<ResultTable, Vec<Failure>> {
    let per_channel = gather(
        channels(cfg)
            .par_iter()
            .map(|&ch| {
                Ok(spectrum_rows(
                    ch,
                    &solve(ch).map_err(fail(format!("m={} n={}", ch.m, ch.n)))?,
                ))
            })
            .collect(),
    )?;
    let mut table = ResultTable::new(
        columns(&[
            ("m", I64),
            ("n", I64),
            ("level", I64),
            (labels[0], I64),
            (labels[1], I64),
            ("energy", F64),
            ("change", F64),
            ("converged", Bool),
        ]),
        provenance(cfg),
    );
    per_channel.into_iter().flatten().for_each(|r| table.push(r));
    Ok(table)
}

fn spectrum_qpm(cfg: &ScenarioConfig) -> Result<ResultTable, Vec<Failure>> {
    let inertia = cfg.model.isotropic_inertia(cfg.dim).expect("validated");
    let PotentialSpec::QpmFamily { a, b, c } = cfg.potential else {
        unreachable!("validated")
    };
    let nm = &cfg.numerics;
    let grid = RadialGrid {
        points: nm.grid_points.expect("filled"),
        extent: nm.domain.expect("filled")[1],
    };
    let levels = nm.levels.expect("filled");
    dalembert_spectrum(cfg, ["k_plus", "k_minus"], |ch| {
        let (plus, minus) = dalembert_qpm_solver(
            ch,
            inertia,
            cfg.hbar,
            inverse_square_plus_harmonic(a, c),
            inverse_square_plus_harmonic(b, c),
            grid,
            levels,
        )?;
        Ok(combine_qpm(&plus, &minus, levels))
    })
}

fn spectrum_polar(cfg: &ScenarioConfig) -> Result<ResultTable, Vec<Failure>> {
    let inertia = cfg.model.isotropic_inertia(cfg.dim).expect("validated");
    let nm = &cfg.numerics;
    let radial = RadialGrid {
        points: nm.grid_points.expect("filled"),
        extent: nm.domain.expect("filled")[1],
    };
    let points = nm.angular_points.expect("filled");
    let (v_r, v_phi, angular): (ScalarFn, ScalarFn, AngularGrid) = match cfg.potential {
        PotentialSpec::QpmFamily { a, b, c } => (
            Arc::new(move |r: f64| c * r * r),
            Arc::new(move |f: f64| a / f.cos().powi(2) + b / f.sin().powi(2)),
            AngularGrid {
                points,
                ..AngularGrid::default()
            },
        ),
        PotentialSpec::PolarTrig { kappa } => (
            Arc::new(move |r: f64| 0.5 * kappa * r * r),
            Arc::new(move |f: f64| 2.0 * kappa / (2.0 * f).cos()),
            AngularGrid {
                points,
                upper: FRAC_PI_4,
            },
        ),
        _ => unreachable!("validated"),
    };
    let levels = nm.levels.expect("filled");
    dalembert_spectrum(cfg, ["radial", "angular"], |ch| {
        dalembert_polar_solver(
            ch,
            inertia,
            cfg.hbar,
            v_r.clone(),
            v_phi.clone(),
            angular,
            radial,
            levels,
        )
    })
}

fn operator_3d(cfg: &ScenarioConfig) -> Result<ResultTable, Vec<Failure>> {
    let p = prepare(cfg).map_err(setup_failure)?;
    let nm = &cfg.numerics;
    let [lo, hi] = nm.domain.expect("filled");
    let grid = Grid3 {
        points: nm.grid_points.expect("filled"),
        lo,
        hi,
    };
    let (levels, tol) = (nm.levels.expect("filled"), nm.tolerance.expect("filled"));
    let spins = cfg.channels.clone().unwrap_or_default().spins.unwrap_or_default();
    let dalembert = matches!(p.model, InertiaModel::DAlembert { .. });
    let potential: Option<Potential> = (p.system.potential != Potential::None).then(|| p.system.potential.clone());
    let rows = gather(
        spins
            .par_iter()
            .enumerate()
            .map(|(i, &[s, j])| {
                let item = format!("s={s} j={j}");
                let ch = Channel3::new(s, j).map_err(fail(&item))?;
                let mut op = reduced_kinetic_3d(&p.model, ch, grid, cfg.hbar).map_err(fail(&item))?;
                if let Some(v) = potential.clone() {
                    op = op.with_potential(move |q: &[f64; 3]| {
                        let q = Vector::from_iterator(3, q.iter().map(|x| if dalembert { x.ln() } else { *x }));
                        v.value_q(&q)
                    });
                }
                let mut rng = sample_rng(cfg.seed, i as u64);
                let mut amp = || -> Vec<Complex64> {
                    (0..op.unknowns())
                        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                        .collect()
                };
                let (f1, f2) = (amp(), amp());
                let residual = op.hermiticity_residual(&f1, &f2).map_err(fail(&item))?;
                let max_iter = op.unknowns().min(4000);
                let vals = op.lowest_eigenvalues(levels, tol, max_iter).map_err(fail(&item))?;
                Ok(vals
                    .iter()
                    .enumerate()
                    .map(|(k, e)| vec![s.into(), j.into(), residual.into(), Cell::I64(k as i64), (*e).into()])
                    .collect::<Vec<_>>())
            })
            .collect(),
    )?;
    let mut table = ResultTable::new(
        columns(&[
            ("s", F64),
            ("j", F64),
            ("hermiticity_residual", F64),
            ("level", I64),
            ("energy", F64),
        ]),
        provenance(cfg),
    );
    rows.into_iter().flatten().for_each(|r| table.push(r));
    Ok(table)
}
