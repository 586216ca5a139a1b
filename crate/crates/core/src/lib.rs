//! Quantum statistical mechanics through classical field-theoretic machinery:
//! imaginary-time propagators built by operator splitting, an independent
//! eigen-route through the one-particle Kohn-Sham problem, self-consistent
//! fields with Hartree interactions, pair exchange statistics, and real-time
//! wavepacket dynamics.
//!
//! Everything works in Hartree atomic units. The diffusion equation solved
//! along the thermal contour is
//!
//! ```text
//! dq/ds = (1/2m) laplacian(q) - w q,    q(r0, r, 0) = delta(r - r0)
//! ```
//!
//! and all static observables derive from the two-point kernel q(r0, r, beta).

pub mod domain;
pub mod dynamics;
pub mod error;
pub mod exchange;
pub mod propagator;
pub mod scf;
pub mod spectral;
mod transforms;

pub use domain::{
    make_grid, BoundaryCondition, ComplexField, Grid, GridKind, ScalarField, UnitSystem,
};
pub use error::{Error, Result};
