//! Finite-volume Crank-Nicolson evolution of radial heat semigroups
//! exp(-t(-Laplace + V)).
//!
//! The spatial operator is discretized in divergence form on a radial
//! grid, so the scheme inherits two exact invariants of the continuous
//! flow: contraction of the discrete weighted L^2 norm, and conservation
//! of the pairing with the discrete harmonic weight (the grid function
//! annihilated by the discrete operator) up to the flux through the outer
//! boundary.  Both are recorded alongside Lorentz norms of the solution
//! at geometrically spaced times.

mod evolve;
mod operator;
mod timegrid;

pub use evolve::{
    evolve, experiment_grid, interior_lower_ratio, required_radius, EvolutionRecord,
    EvolutionTrace, HeatError, Observables, LEAK_BUDGET, NEGATIVE_CLAMP_REL, RAMP_WIDTH_REL,
};
pub use operator::{discrete_harmonic_weight, DiscreteOperator};
pub use timegrid::{TimeGrid, TimeGridSpec};
