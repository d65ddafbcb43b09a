//! Classical and quantum mechanics of affinely rigid bodies.
//!
//! Configurations are pairs `(x, φ)` with `φ ∈ GL⁺(n)`. The crate covers
//! configuration geometry, momentum maps, invariant kinetic models with
//! trajectory integration, and reduced Schrödinger operators over the
//! deformation invariants.

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub mod dynamics;
pub mod error;
pub mod geometry;
pub mod kinematics;
pub mod linalg;
pub mod quantum;

pub use error::{Error, Result};
pub use geometry::{Configuration, MetricPair, PolarForm, TwoPolarForm};
pub use kinematics::PhasePoint;
pub use linalg::{Mat, Vector};
