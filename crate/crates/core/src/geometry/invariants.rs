use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::MetricPair;
use crate::linalg::{symmetric_eigen_ascending, Vector};

/// Logarithmic deformation invariants `q^a = ½ ln λ_a`, `λ_a` the ascending
/// eigenvalues of `η⁻¹G`.
pub fn deformation_invariants(phi: &crate::linalg::Mat, metrics: &MetricPair) -> Result<Vector> {
    let det = phi.determinant();
    if det <= 0.0 || !det.is_finite() {
        return Err(Error::OrientationError { det });
    }
    let chart = metrics.to_euclidean_chart(phi);
    let (vals, _) = symmetric_eigen_ascending(&(chart.transpose() * &chart));
    Ok(vals.map(|l| 0.5 * l.ln()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightKind {
    /// `∏_{i<j} |sinh(q^i − q^j)|`, argument is `q`.
    Haar,
    /// `∏_{i<j} |(Q^i)² − (Q^j)²|`, argument is `Q`.
    Lebesgue,
}

pub fn measure_weights(values: &[f64], kind: WeightKind) -> f64 {
    let mut w = 1.0;
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            w *= match kind {
                WeightKind::Haar => (values[i] - values[j]).sinh().abs(),
                WeightKind::Lebesgue => (values[i] * values[i] - values[j] * values[j]).abs(),
            };
        }
    }
    w
}

#[derive(Debug, Clone, PartialEq)]
pub struct DilatationSplit {
    pub qbar: f64,
    pub relative: Vector,
    /// `q² − q¹`, present for two invariants only.
    pub x: Option<f64>,
}

pub fn dilatation_split(q: &Vector) -> DilatationSplit {
    let n = q.len();
    let qbar = if n == 0 { 0.0 } else { q.sum() / n as f64 };
    DilatationSplit {
        qbar,
        relative: q.map(|v| v - qbar),
        x: (n == 2).then(|| q[1] - q[0]),
    }
}
