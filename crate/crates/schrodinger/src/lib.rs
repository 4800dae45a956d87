//! Radial Schrodinger operators -Laplace + V on R^N with inverse-square
//! potential tails.
//!
//! The potentials handled here satisfy r^2 V(r) -> omega as r -> infinity
//! together with mild regularity near the origin.  The long-time behavior
//! of the associated heat semigroup is governed by the decay exponent A
//! of the positive harmonic profile U solving (-Laplace + V) U = 0 with
//! U(r) ~ r^(-A) at infinity; A is one of the two roots
//!
//!   (N - 2 -/+ sqrt((N - 2)^2 + 4 omega)) / 2
//!
//! of the indicial equation.  The crate computes U by adaptive
//! integration of the radial ODE, estimates A from its tail, and
//! provides Rayleigh-quotient probes for checking that -Laplace + V has
//! no negative spectrum.

mod harmonic;
mod ode;
mod potential;
mod rayleigh;

pub use harmonic::{
    estimate_decay_exponent, solve_harmonic, DecayEstimate, HarmonicError, HarmonicProfile,
    TAIL_RESIDUAL_TOL,
};
pub use ode::{integrate_radial, OdeError, RadialOdeSolution};
pub use potential::{
    alpha_beta, branch_exponents, hardy_bound, Potential, PotentialError, DECAY_GUARD,
};
pub use rayleigh::{
    rayleigh_quotient, rayleigh_quotient_fn, rayleigh_scan, rayleigh_scan_fn, RayleighReport,
    ADMISSIBILITY_TOL,
};
