//! Scenario documents: TOML in, validated [`ScenarioConfig`] out.

use std::path::PathBuf;

use affine_core::dynamics::{InertiaModel, Potential, Scheme};
use affine_core::quantum::Channel3;
use affine_core::{Mat, MetricPair};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ScenarioKind {
    #[serde(rename = "classical_trajectory")]
    ClassicalTrajectory,
    #[serde(rename = "geodesic_compare")]
    GeodesicCompare,
    #[serde(rename = "conservation_audit")]
    ConservationAudit,
    #[serde(rename = "boundedness_2d")]
    Boundedness2D,
    #[serde(rename = "spectrum_2d")]
    Spectrum2D,
    #[serde(rename = "spectrum_qpm")]
    SpectrumQpm,
    #[serde(rename = "spectrum_polar")]
    SpectrumPolar,
    #[serde(rename = "operator_3d_check")]
    Operator3DCheck,
}

impl ScenarioKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioKind::ClassicalTrajectory => "classical_trajectory",
            ScenarioKind::GeodesicCompare => "geodesic_compare",
            ScenarioKind::ConservationAudit => "conservation_audit",
            ScenarioKind::Boundedness2D => "boundedness_2d",
            ScenarioKind::Spectrum2D => "spectrum_2d",
            ScenarioKind::SpectrumQpm => "spectrum_qpm",
            ScenarioKind::SpectrumPolar => "spectrum_polar",
            ScenarioKind::Operator3DCheck => "operator_3d_check",
        }
    }
}

fn one() -> f64 {
    1.0
}

fn two() -> usize {
    2
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelSpec {
    Dalembert {
        #[serde(default = "one")]
        mass: f64,
        /// Full inertia tensor; wins over `j_iso`.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        j: Option<Vec<Vec<f64>>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        j_iso: Option<f64>,
    },
    AffineAffine {
        #[serde(default = "one")]
        mass: f64,
        #[serde(default = "one")]
        a: f64,
        #[serde(default)]
        b: f64,
    },
    AffineMetric {
        #[serde(default = "one")]
        mass: f64,
        #[serde(default = "one")]
        inertia: f64,
        #[serde(default)]
        a: f64,
        #[serde(default)]
        b: f64,
    },
    MetricAffine {
        #[serde(default = "one")]
        mass: f64,
        #[serde(default = "one")]
        inertia: f64,
        #[serde(default)]
        a: f64,
        #[serde(default)]
        b: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum PotentialSpec {
    #[default]
    #[serde(rename = "none")]
    Free,
    DilatationHarmonic {
        kappa: f64,
    },
    BinaryShear {
        stiffness: Vec<Vec<f64>>,
    },
    TwoDimPreset {
        kappa: f64,
    },
    PolarTrig {
        kappa: f64,
    },
    QpmFamily {
        a: f64,
        b: f64,
        c: f64,
    },
    Sum {
        terms: Vec<PotentialSpec>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricsSpec {
    pub g: Vec<Vec<f64>>,
    pub eta: Vec<Vec<f64>>,
}

/// Missing entries are drawn from the scenario seed.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xdot: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phidot: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Numerics {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scheme: Option<Scheme>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub record_every: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angular_points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levels: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simulate: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub escape_radius: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSpec {
    /// Inclusive ranges, used when `list` is absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<[i32; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<[i32; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub list: Option<Vec<[i32; 2]>>,
    /// `(s, j)` pairs for three-dimensional checks.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spins: Option<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MomentaSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_alpha: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_beta: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub kind: ScenarioKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "one")]
    pub hbar: f64,
    #[serde(default = "two")]
    pub dim: usize,
    /// Not part of the config hash.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    pub model: ModelSpec,
    #[serde(default)]
    pub potential: PotentialSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metrics: Option<MetricsSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<InitialSpec>,
    #[serde(default)]
    pub numerics: Numerics,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub channels: Option<ChannelSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub momenta: Option<MomentaSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BatchDoc {
    scenario: Vec<ScenarioConfig>,
}

fn parse_error(text: &str, err: toml::de::Error) -> CliError {
    let location = match err.span() {
        Some(span) => {
            let before = &text[..span.start.min(text.len())];
            let line = before.matches('\n').count() + 1;
            let col = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
            format!("line {line}, column {col}")
        }
        None => "document".into(),
    };
    CliError::Parse {
        location,
        message: err.message().trim().to_string(),
    }
}

/// Parses, fills kind-specific defaults and validates one scenario.
pub fn load_config(text: &str) -> CliResult<ScenarioConfig> {
    let mut cfg: ScenarioConfig = toml::from_str(text).map_err(|e| parse_error(text, e))?;
    cfg.fill_defaults();
    cfg.validate()?;
    Ok(cfg)
}

/// Loads either a `[[scenario]]` batch or a single scenario as a batch of one.
pub fn load_batch(text: &str) -> CliResult<Vec<ScenarioConfig>> {
    let table: toml::Table = toml::from_str(text).map_err(|e| parse_error(text, e))?;
    if !table.contains_key("scenario") {
        return Ok(vec![load_config(text)?]);
    }
    let doc: BatchDoc = toml::from_str(text).map_err(|e| parse_error(text, e))?;
    let mut out = Vec::with_capacity(doc.scenario.len());
    for (i, mut cfg) in doc.scenario.into_iter().enumerate() {
        cfg.fill_defaults();
        cfg.validate().map_err(|e| match e {
            CliError::Validation { path, message } => CliError::Validation {
                path: format!("scenario[{i}].{path}"),
                message,
            },
            other => other,
        })?;
        out.push(cfg);
    }
    Ok(out)
}

pub fn to_toml(cfg: &ScenarioConfig) -> String {
    toml::to_string(cfg).expect("scenario configs serialize to TOML")
}

/// Canonical JSON of the config with `output` removed.
pub fn canonical_json(cfg: &ScenarioConfig) -> String {
    let mut c = cfg.clone();
    c.output = None;
    serde_json::to_string(&c).expect("scenario configs serialize to JSON")
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

pub fn config_hash(cfg: &ScenarioConfig) -> String {
    sha256_hex(canonical_json(cfg).as_bytes())
}

fn matrix(rows: &[Vec<f64>], n: usize, path: &str) -> CliResult<Mat> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(CliError::validation(path, format!("expected a {n}×{n} matrix")));
    }
    if rows.iter().flatten().any(|v| !v.is_finite()) {
        return Err(CliError::validation(path, "entries must be finite"));
    }
    Ok(Mat::from_fn(n, n, |i, j| rows[i][j]))
}

fn positive(v: f64, path: &str) -> CliResult<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(CliError::validation(
            path,
            format!("must be positive and finite, got {v}"),
        ))
    }
}

impl ModelSpec {
    pub fn build(&self, n: usize) -> CliResult<InertiaModel> {
        let model = match self {
            ModelSpec::Dalembert { mass, j, j_iso } => {
                let j = match (j, j_iso) {
                    (Some(rows), _) => matrix(rows, n, "model.j")?,
                    (None, Some(v)) => Mat::identity(n, n) * *v,
                    (None, None) => Mat::identity(n, n),
                };
                InertiaModel::DAlembert { m: *mass, j }
            }
            ModelSpec::AffineAffine { mass, a, b } => InertiaModel::AffineAffine { m: *mass, a: *a, b: *b },
            ModelSpec::AffineMetric { mass, inertia, a, b } => InertiaModel::AffineMetric {
                m: *mass,
                i: *inertia,
                a: *a,
                b: *b,
            },
            ModelSpec::MetricAffine { mass, inertia, a, b } => InertiaModel::MetricAffine {
                m: *mass,
                i: *inertia,
                a: *a,
                b: *b,
            },
        };
        model.validate(n).map_err(|e| CliError::validation("model", e))?;
        Ok(model)
    }

    /// Scalar `J` of an isotropic d'Alembert model.
    pub fn isotropic_inertia(&self, n: usize) -> Option<f64> {
        let ModelSpec::Dalembert { j, j_iso, .. } = self else {
            return None;
        };
        match (j, j_iso) {
            (Some(rows), _) => {
                let v = rows.first()?.first().copied()?;
                let iso = (0..n).all(|a| (0..n).all(|b| rows[a][b] == if a == b { v } else { 0.0 }));
                iso.then_some(v)
            }
            (None, Some(v)) => Some(*v),
            (None, None) => Some(1.0),
        }
    }
}

impl PotentialSpec {
    pub fn build(&self, n: usize, path: &str) -> CliResult<Potential> {
        let p = match self {
            PotentialSpec::Free => Potential::None,
            PotentialSpec::DilatationHarmonic { kappa } => Potential::DilatationHarmonic { kappa: *kappa },
            PotentialSpec::BinaryShear { stiffness } => Potential::BinaryShear {
                stiffness: matrix(stiffness, n, &format!("{path}.stiffness"))?,
            },
            PotentialSpec::TwoDimPreset { kappa } => Potential::TwoDimPreset { kappa: *kappa },
            PotentialSpec::PolarTrig { kappa } => Potential::PolarTrig { kappa: *kappa },
            PotentialSpec::QpmFamily { a, b, c } => Potential::QpmFamily { a: *a, b: *b, c: *c },
            PotentialSpec::Sum { terms } => Potential::Sum(
                terms
                    .iter()
                    .enumerate()
                    .map(|(i, t)| t.build(n, &format!("{path}.terms[{i}]")))
                    .collect::<CliResult<_>>()?,
            ),
        };
        p.validate(n).map_err(|e| CliError::validation(path, e))?;
        Ok(p)
    }
}

impl ChannelSpec {
    /// Explicit list, else the `m × n` ranges in row-major order.
    pub fn pairs(&self) -> Vec<(i32, i32)> {
        if let Some(list) = &self.list {
            return list.iter().map(|p| (p[0], p[1])).collect();
        }
        let [m0, m1] = self.m.unwrap_or([0, 0]);
        let [n0, n1] = self.n.unwrap_or([0, 0]);
        (m0..=m1).flat_map(|m| (n0..=n1).map(move |n| (m, n))).collect()
    }
}

impl ScenarioConfig {
    pub fn display_name(&self) -> String {
        self.name.clone().unwrap_or_else(|| self.kind.as_str().to_string())
    }

    pub fn metric_pair(&self) -> CliResult<MetricPair> {
        match &self.metrics {
            None => Ok(MetricPair::euclidean(self.dim)),
            Some(m) => {
                let g = matrix(&m.g, self.dim, "metrics.g")?;
                let eta = matrix(&m.eta, self.dim, "metrics.eta")?;
                MetricPair::new(g, eta).map_err(|e| CliError::validation("metrics", e))
            }
        }
    }

    /// Fills every numerical parameter the kind reads; the result is the
    /// canonical form that gets hashed.
    pub fn fill_defaults(&mut self) {
        use ScenarioKind::*;
        let k = self.kind;
        let nm = &mut self.numerics;
        let classical = matches!(
            k,
            ClassicalTrajectory | GeodesicCompare | ConservationAudit | Boundedness2D
        );
        if classical {
            nm.dt.get_or_insert(1e-3);
            nm.steps.get_or_insert(10_000);
            nm.scheme.get_or_insert(match k {
                GeodesicCompare | Boundedness2D => Scheme::Rk4,
                _ => Scheme::ImplicitMidpoint,
            });
        }
        match k {
            ClassicalTrajectory | GeodesicCompare => {
                nm.record_every.get_or_insert(100);
            }
            _ => {}
        }
        match k {
            GeodesicCompare => {
                nm.samples.get_or_insert(20);
            }
            ConservationAudit => {
                nm.samples.get_or_insert(4);
            }
            _ => {}
        }
        if k == Boundedness2D {
            nm.simulate.get_or_insert(false);
            nm.x0.get_or_insert(1.5);
            nm.escape_radius.get_or_insert(20.0);
            let mo = self.momenta.get_or_insert_with(Default::default);
            let span: Vec<f64> = (-2..=2).map(f64::from).collect();
            mo.p_alpha.get_or_insert_with(|| span.clone());
            mo.p_beta.get_or_insert(span);
        }
        let (points, domain, levels) = match k {
            Spectrum2D => (4000, [0.0, 40.0], 16),
            SpectrumQpm => (2000, [0.0, 12.0], 5),
            SpectrumPolar => (2000, [0.0, 14.0], 5),
            Operator3DCheck if matches!(self.model, ModelSpec::Dalembert { .. }) => (12, [0.0, 3.0], 4),
            Operator3DCheck => (12, [-1.5, 1.5], 4),
            _ => return,
        };
        nm.grid_points.get_or_insert(points);
        nm.domain.get_or_insert(domain);
        nm.levels.get_or_insert(levels);
        nm.tolerance
            .get_or_insert(if k == Operator3DCheck { 1e-10 } else { 1e-3 });
        if k == SpectrumPolar {
            nm.angular_points.get_or_insert(2000);
        }
        let ch = self.channels.get_or_insert_with(Default::default);
        match k {
            Spectrum2D if ch.list.is_none() => {
                ch.m.get_or_insert([-3, 3]);
                ch.n.get_or_insert([-3, 3]);
            }
            SpectrumQpm | SpectrumPolar if ch.list.is_none() => {
                ch.m.get_or_insert([-1, 1]);
                ch.n.get_or_insert([-1, 1]);
            }
            Operator3DCheck => {
                ch.spins.get_or_insert_with(|| vec![[0.0, 0.0], [0.5, 0.5], [1.0, 1.0]]);
            }
            _ => {}
        }
    }

    pub fn validate(&self) -> CliResult<()> {
        use ScenarioKind::*;
        let k = self.kind;
        let n = self.dim;
        if !(1..=6).contains(&n) {
            return Err(CliError::validation("dim", format!("must lie in 1..=6, got {n}")));
        }
        if self.seed > i64::MAX as u64 {
            return Err(CliError::validation("seed", "must fit a signed 64-bit integer"));
        }
        positive(self.hbar, "hbar")?;
        let model = self.model.build(n)?;
        self.metric_pair()?;
        self.potential.build(n, "potential")?;
        if let Some(init) = &self.initial {
            let vec_ok = |v: &Option<Vec<f64>>, path: &str| match v {
                Some(v) if v.len() != n || v.iter().any(|x| !x.is_finite()) => {
                    Err(CliError::validation(path, format!("expected {n} finite entries")))
                }
                _ => Ok(()),
            };
            vec_ok(&init.x, "initial.x")?;
            vec_ok(&init.xdot, "initial.xdot")?;
            if let Some(rows) = &init.phi {
                let phi = matrix(rows, n, "initial.phi")?;
                if phi.determinant() <= 0.0 {
                    return Err(CliError::validation("initial.phi", "det φ must be positive"));
                }
            }
            if let Some(rows) = &init.phidot {
                matrix(rows, n, "initial.phidot")?;
            }
        }
        let nm = &self.numerics;
        if let Some(dt) = nm.dt {
            positive(dt, "numerics.dt")?;
        }
        for (v, path) in [
            (nm.steps, "numerics.steps"),
            (nm.record_every, "numerics.record_every"),
            (nm.samples, "numerics.samples"),
            (nm.levels, "numerics.levels"),
        ] {
            if v == Some(0) {
                return Err(CliError::validation(path, "must be at least 1"));
            }
        }
        if let Some(tol) = nm.tolerance {
            positive(tol, "numerics.tolerance")?;
        }
        if let Some(r) = nm.escape_radius {
            positive(r, "numerics.escape_radius")?;
        }
        if let Some(x0) = nm.x0 {
            positive(x0, "numerics.x0")?;
        }
        let min_points = if k == Operator3DCheck { 4 } else { 16 };
        for (v, path) in [
            (nm.grid_points, "numerics.grid_points"),
            (nm.angular_points, "numerics.angular_points"),
        ] {
            if v.is_some_and(|p| p < min_points) {
                return Err(CliError::validation(
                    path,
                    format!("needs at least {min_points} points"),
                ));
            }
        }
        if let Some([lo, hi]) = nm.domain {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(CliError::validation(
                    "numerics.domain",
                    format!("expected lo < hi, got [{lo}, {hi}]"),
                ));
            }
        }
        if matches!(k, Spectrum2D | SpectrumQpm | SpectrumPolar) && nm.domain.is_some_and(|d| d[0] != 0.0) {
            return Err(CliError::validation(
                "numerics.domain",
                "radial and shear boxes start at 0",
            ));
        }
        let need_dim = |want: usize| {
            if n == want {
                Ok(())
            } else {
                Err(CliError::validation(
                    "dim",
                    format!("{} requires dim = {want}", k.as_str()),
                ))
            }
        };
        let need_free = || {
            if self.potential == PotentialSpec::Free {
                Ok(())
            } else {
                Err(CliError::validation(
                    "potential.type",
                    format!("{} is defined for free motion only", k.as_str()),
                ))
            }
        };
        let need_isotropic = || {
            self.model.isotropic_inertia(n).ok_or_else(|| {
                CliError::validation(
                    "model",
                    format!("{} needs a d'Alembert model with isotropic J", k.as_str()),
                )
            })
        };
        match k {
            ClassicalTrajectory | ConservationAudit => {}
            GeodesicCompare => {
                if !matches!(model, InertiaModel::AffineAffine { .. }) {
                    return Err(CliError::validation(
                        "model.type",
                        "geodesic_compare needs affine_affine",
                    ));
                }
                need_free()?;
            }
            Boundedness2D => {
                need_dim(2)?;
                if !matches!(model, InertiaModel::AffineAffine { .. }) {
                    return Err(CliError::validation("model.type", "boundedness_2d needs affine_affine"));
                }
                need_free()?;
                if self.metrics.is_some() {
                    return Err(CliError::validation("metrics", "boundedness_2d uses Euclidean metrics"));
                }
                let mo = self.momenta.as_ref();
                for (v, path) in [
                    (mo.and_then(|m| m.p_alpha.as_ref()), "momenta.p_alpha"),
                    (mo.and_then(|m| m.p_beta.as_ref()), "momenta.p_beta"),
                ] {
                    if v.is_some_and(|v| v.is_empty() || v.iter().any(|x| !x.is_finite())) {
                        return Err(CliError::validation(path, "expected a non-empty list of finite values"));
                    }
                }
            }
            Spectrum2D => {
                need_dim(2)?;
                if matches!(model, InertiaModel::DAlembert { .. }) {
                    return Err(CliError::validation("model.type", "spectrum_2d needs an affine model"));
                }
                need_free()?;
            }
            SpectrumQpm => {
                need_dim(2)?;
                need_isotropic()?;
                if !matches!(self.potential, PotentialSpec::QpmFamily { .. }) {
                    return Err(CliError::validation("potential.type", "spectrum_qpm needs qpm_family"));
                }
            }
            SpectrumPolar => {
                need_dim(2)?;
                need_isotropic()?;
                if !matches!(
                    self.potential,
                    PotentialSpec::QpmFamily { .. } | PotentialSpec::PolarTrig { .. }
                ) {
                    return Err(CliError::validation(
                        "potential.type",
                        "spectrum_polar needs qpm_family or polar_trig",
                    ));
                }
            }
            Operator3DCheck => {
                need_dim(3)?;
                if matches!(model, InertiaModel::DAlembert { .. }) {
                    need_isotropic()?;
                    if nm.domain.is_some_and(|d| d[0] < 0.0) {
                        return Err(CliError::validation(
                            "numerics.domain",
                            "d'Alembert chamber lives on Q ≥ 0",
                        ));
                    }
                }
            }
        }
        if let Some(ch) = &self.channels {
            for (v, path) in [(ch.m, "channels.m"), (ch.n, "channels.n")] {
                if v.is_some_and(|[lo, hi]| lo > hi) {
                    return Err(CliError::validation(path, "expected [lo, hi] with lo ≤ hi"));
                }
            }
            if matches!(k, Spectrum2D | SpectrumQpm | SpectrumPolar) && ch.pairs().is_empty() {
                return Err(CliError::validation("channels", "no channels selected"));
            }
            for (i, [s, j]) in ch.spins.iter().flatten().enumerate() {
                Channel3::new(*s, *j).map_err(|e| CliError::validation(format!("channels.spins[{i}]"), e))?;
            }
        }
        Ok(())
    }
}
