use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{measure_weights, WeightKind};
use crate::quantum::CMat;

/// Nodes of a tensor grid over the invariants with trapezoid weights.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantGrid {
    pub nodes: Vec<Vec<f64>>,
    pub quadrature: Vec<f64>,
}

impl InvariantGrid {
    pub fn tensor_trapezoid(axes: &[Vec<f64>]) -> Result<Self> {
        let mut nodes = vec![Vec::new()];
        let mut quadrature = vec![1.0];
        for axis in axes {
            if axis.len() < 2 {
                return Err(Error::ShapeError("each axis needs at least two nodes".into()));
            }
            let w: Vec<f64> = (0..axis.len())
                .map(|i| {
                    let left = if i > 0 { axis[i] - axis[i - 1] } else { 0.0 };
                    let right = if i + 1 < axis.len() { axis[i + 1] - axis[i] } else { 0.0 };
                    0.5 * (left + right)
                })
                .collect();
            let mut next_nodes = Vec::with_capacity(nodes.len() * axis.len());
            let mut next_quad = Vec::with_capacity(nodes.len() * axis.len());
            for (node, q) in nodes.iter().zip(&quadrature) {
                for (x, wx) in axis.iter().zip(&w) {
                    let mut n = node.clone();
                    n.push(*x);
                    next_nodes.push(n);
                    next_quad.push(q * wx);
                }
            }
            nodes = next_nodes;
            quadrature = next_quad;
        }
        Ok(Self { nodes, quadrature })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// One reduced amplitude: an `N(α)×N(β)` matrix per grid node.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelField {
    pub label: String,
    pub values: Vec<CMat>,
}

/// `Σ_channels (1/N(α)N(β)) ∫ Tr(f₁⁺ f₂) P dq` by trapezoid quadrature,
/// `P` the Haar (`q`) or Lebesgue (`Q`) weight.
pub fn weighted_inner_product(
    f1: &[ChannelField],
    f2: &[ChannelField],
    grid: &InvariantGrid,
    kind: WeightKind,
) -> Result<Complex64> {
    if f1.len() != f2.len() {
        return Err(Error::ShapeError(format!("{} channels against {}", f1.len(), f2.len())));
    }
    let p: Vec<f64> = grid.nodes.iter().map(|q| measure_weights(q, kind)).collect();
    let mut total = Complex64::new(0.0, 0.0);
    for (a, b) in f1.iter().zip(f2) {
        if a.label != b.label || a.values.len() != grid.len() || b.values.len() != grid.len() {
            return Err(Error::ShapeError(format!(
                "channel {} / {} does not match the grid",
                a.label, b.label
            )));
        }
        let mut s = Complex64::new(0.0, 0.0);
        for (i, (x, y)) in a.values.iter().zip(&b.values).enumerate() {
            if x.shape() != y.shape() {
                return Err(Error::ShapeError(format!(
                    "block shapes {:?} and {:?}",
                    x.shape(),
                    y.shape()
                )));
            }
            let tr: Complex64 = x.iter().zip(y.iter()).map(|(u, v)| u.conj() * v).sum();
            s += tr * (p[i] * grid.quadrature[i]);
        }
        let (na, nb) = a.values.first().map_or((1, 1), |m| m.shape());
        total += s / (na * nb) as f64;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(label: &str, grid: &InvariantGrid, f: impl Fn(&[f64]) -> CMat) -> ChannelField {
        ChannelField {
            label: label.into(),
            values: grid.nodes.iter().map(|q| f(q)).collect(),
        }
    }

    #[test]
    fn norm_is_real_non_negative() {
        let axis: Vec<f64> = (0..20).map(|i| 0.05 + i as f64 * 0.1).collect();
        let grid = InvariantGrid::tensor_trapezoid(&[axis.clone(), axis.iter().map(|x| x + 0.03).collect()]).unwrap();
        let f = vec![field("s=1/2 j=1/2", &grid, |q| {
            CMat::from_fn(2, 2, |r, c| Complex64::new(q[0] * (r + 1) as f64, q[1] - c as f64))
        })];
        let ip = weighted_inner_product(&f, &f, &grid, WeightKind::Haar).unwrap();
        assert!(ip.re > 0.0 && ip.im.abs() < 1e-14 * ip.re);
    }

    #[test]
    fn trapezoid_weights_sum_to_volume() {
        let grid = InvariantGrid::tensor_trapezoid(&[vec![0.0, 0.5, 2.0], vec![1.0, 4.0]]).unwrap();
        assert!((grid.quadrature.iter().sum::<f64>() - 6.0).abs() < 1e-14);
    }

    #[test]
    fn mismatched_grids_are_rejected() {
        let grid = InvariantGrid::tensor_trapezoid(&[vec![0.0, 1.0]]).unwrap();
        let f = vec![ChannelField {
            label: "a".into(),
            values: vec![CMat::zeros(1, 1)],
        }];
        assert!(matches!(
            weighted_inner_product(&f, &f, &grid, WeightKind::Haar),
            Err(Error::ShapeError(_))
        ));
    }
}
