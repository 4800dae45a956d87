//! Lorentz-space norms for radial functions on R^N.
//!
//! The crate works with radial profiles that are piecewise linear in the
//! radius r and extended by zero beyond the last grid node.  For such
//! profiles the distribution function
//!
//!   mu(lambda) = |{ x : |f(x)| > lambda }|
//!
//! is computed analytically cell by cell, which makes the non-increasing
//! rearrangement f*, the spherical rearrangement f# and the two-exponent
//! norm
//!
//!   ||f||_{p,s} = ( int ( |x|^{N/p} f#(x) )^s dx / |x|^N )^{1/s}
//!
//! (with the usual sup conventions at s = infinity) available to close to
//! machine accuracy.  Second exponents are tracked as exact rationals so
//! that Hoelder conjugation and admissibility checks never suffer from
//! rounding.
//!
//! Conventions used throughout:
//! * grids start at r = 0 and carry the space dimension N >= 2,
//! * all set measures include the full volume factor of R^N (the measure
//!   of a ball of radius R is c_N R^N with c_N the unit-ball volume),
//! * `||f||_{p,p}` agrees with the ordinary Lebesgue norm.

mod error;
mod exponent;
mod function;
mod grid;
mod norm;
mod quadrature;
mod rearrange;

pub use error::LorentzError;
pub use exponent::{
    holder_conjugate, is_admissible, Exponent, ExponentQuadruple, LorentzExponents, Rational,
};
pub use function::RadialFunction;
pub use grid::{unit_ball_volume, RadialGrid};
pub use norm::{lorentz_norm, lp_norm, truncated_norms, TruncatedNorms};
pub use quadrature::{cell_weighted_power, gauss_legendre_16};
pub use rearrange::{
    decreasing_rearrangement, distribution_function, spherical_rearrangement, DecreasingProfile,
};

/// Relative width of the hairline ramp used to represent jump
/// discontinuities (indicator edges, truncation cutoffs) inside a
/// piecewise-linear profile.
pub const JUMP_WIDTH_REL: f64 = 1e-12;
