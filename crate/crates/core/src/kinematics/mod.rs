//! Velocities, canonical momenta, spin/vorticity, two-polar momenta and
//! numeric Poisson brackets.

mod phase;
mod poisson;
mod spin;
mod two_polar_momenta;
mod velocity;

pub use phase::{PhasePoint, PhaseTangent};
pub use poisson::{
    bracket_from_gradients, fd_gradient, fd_hamiltonian_flow, material_linear_momentum, poisson_bracket, sigma_entry,
    sigma_hat_entry, PhaseGradient, FD_STEP,
};
pub use spin::{casimir, skew_norm_sq, spin_vorticity, trace_split, SpinVorticity};
pub use two_polar_momenta::{
    casimir2_two_polar, planar_momenta, sigma_hat_from_two_polar, sl_casimir_two_polar, two_polar_momenta,
    TwoPolarMomenta,
};
pub use velocity::{affine_velocity, AffineVelocity};
