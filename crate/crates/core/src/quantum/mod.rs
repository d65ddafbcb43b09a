//! Reduced Schrödinger operators over the deformation invariants.
//!
//! Amplitudes live in representation channels: Fourier labels `(m, n)` in
//! the plane, angular-momentum labels `(s, j)` in space. One-dimensional
//! operators are discretized in flux form and symmetrized with the square
//! root of the measure density.

mod angular;
mod channel;
mod dalembert2d;
mod inner_product;
mod lanczos;
mod operator1d;
mod operator3d;
mod peter_weyl;
mod reduced2d;
mod spectrum;
mod tridiag;

pub use angular::{angular_momentum_matrices, AngularMatrices, CMat, HalfInt};
pub use channel::{Channel2, Channel3};
pub use dalembert2d::{
    angular_operator, combine_qpm, dalembert_polar_solver, dalembert_qpm_solver, qpm_operator, qpm_oracle,
    radial_operator, AngularGrid, RadialGrid,
};
pub use inner_product::{weighted_inner_product, ChannelField, InvariantGrid};
pub use lanczos::lanczos_lowest;
pub use operator1d::{
    discretize_1d, solve_levels, Boundary, Discretization, ReducedOperator1D, ScalarFn, SolveOptions, Variable,
};
pub use operator3d::{reduced_kinetic_3d, Grid3, Potential3, ReducedOperator3D};
pub use peter_weyl::{peter_weyl_reduce_2d, peter_weyl_synthesize_2d, ChannelMap, TorusSamples};
pub use reduced2d::{
    bound_state_count, exact_shear_levels, reduced_kinetic_2d, BoundStateOptions, BoundStates, Reduced2D,
    DEFAULT_DILATATION_BOX, DEFAULT_SHEAR_BOX,
};
pub use spectrum::{Level, Spectrum};
pub use tridiag::Tridiagonal;
