//! Metrics, deformation tensors, polar and two-polar decompositions.

mod invariants;
mod metric;
mod polar;
mod tensors;
mod two_polar;

pub use invariants::{deformation_invariants, dilatation_split, measure_weights, DilatationSplit, WeightKind};
pub use metric::MetricPair;
pub use polar::{polar_decompose, PolarForm};
pub use tensors::{green_cauchy, Configuration, DeformationTensors};
pub use two_polar::{two_polar_decompose, TwoPolarForm};
