//! Kinetic models, Hamiltonian flow, integrators and geodesics.

mod geodesic;
mod hamiltonian;
mod inertia;
mod integrate;
mod planar;
mod potential;

pub use geodesic::geodesic_exponential;
pub use hamiltonian::{hamilton_rhs, System};
pub use inertia::{
    inverse_legendre, kinetic_energy, kinetic_energy_alt, kinetic_hamiltonian, kinetic_hamiltonian_forms, legendre,
    CasimirCoefficients, InertiaModel, Velocities,
};
pub use integrate::{
    integrate, integrate_with, ConservationReport, IntegrationError, IntegrationOptions, Scheme, Trajectory,
};
pub use planar::{classify_2d, Boundedness, PlanarState, ShearHamiltonian};
pub use potential::Potential;
