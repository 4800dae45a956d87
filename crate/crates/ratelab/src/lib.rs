//! Decay-rate laboratory: predicted versus measured Lorentz-to-Lorentz
//! decay of radial Schrodinger heat semigroups.
//!
//! For exponents (p, q, sigma, theta) and tail strength A the sharp decay
//! envelope of sup over data of ||exp(-tH) phi||_{q,theta} /
//! ||phi||_{p,sigma} has the form t^gamma (log t)^delta for explicit
//! rational gamma and delta depending on the position of p and q relative
//! to alpha = N/(N - A) and beta = N/A.  This crate implements that rate
//! table exactly in rational arithmetic, drives the heat solver over a
//! small family of extremal initial data, fits (gamma, delta) from the
//! measured norm curves, and issues a verdict comparing fit to theory.

mod curve;
mod error;
mod families;
mod fit;
mod rate;
mod verdict;

pub use curve::{
    empirical_norm_curve, evolve_family, experiment_grid_for_family, observables_for_cells,
    sample_times, truncated_boundedness, CurveSample, FamilyTrace, NormCurve,
};
pub use error::RateLabError;
pub use families::{
    ball_member, dual_critical_core, extremal_family, family_jump_radii, harmonic_cap,
    ladder_radii, unit_bump, FamilyMember,
};
pub use fit::{
    fit_rate, fit_series, l1_growth, RateFit, DELTA_WINDOW_FLOOR, DELTA_WINDOW_FRACTION,
    MIN_LOGLOG_SPREAD, MIN_WINDOW_END, MIN_WINDOW_RATIO,
};
pub use rate::{duality_identity, parse_rational, theoretical_rate, DecayRate};
pub use verdict::{verdict, Verdict, TOL_DELTA, TOL_GAMMA};

pub use lorentz::{Exponent, ExponentQuadruple, LorentzExponents, Rational};
