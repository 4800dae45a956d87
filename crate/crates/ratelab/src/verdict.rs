//! Comparison of fitted envelope exponents against the predicted table.
//!
//! A sampled curve is a lower bound on the mapping norm, so it can fall
//! short of the prediction without contradicting anything: the family
//! may simply miss the extremal shape.  A curve that rises above the
//! predicted envelope is a genuine contradiction.  The verdict encodes
//! that asymmetry: agreement within tolerance passes, exceeding the
//! prediction fails, and everything else, including fits that could not
//! resolve the log power, is inconclusive.

use crate::{DecayRate, RateFit};

/// Default tolerance on the fitted power of t.
pub const TOL_GAMMA: f64 = 0.05;

/// Default tolerance on the fitted power of log t.
pub const TOL_DELTA: f64 = 0.15;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// Both exponents agree with the prediction within tolerance.
    Pass,
    /// The measured lower bound beats the predicted envelope.
    Fail,
    /// The fit under-achieves or could not resolve the exponents.
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Pass => write!(f, "pass"),
            Verdict::Fail => write!(f, "fail"),
            Verdict::Inconclusive => write!(f, "inconclusive"),
        }
    }
}

/// Classifies a fit against the predicted rate at the given tolerances.
pub fn verdict(fit: &RateFit, theory: &DecayRate, tol_gamma: f64, tol_delta: f64) -> Verdict {
    if fit.ill_conditioned() {
        return Verdict::Inconclusive;
    }
    let Some(delta) = fit.delta() else {
        return Verdict::Inconclusive;
    };
    let gamma_err = fit.gamma() - theory.gamma_f64();
    let delta_err = delta - theory.delta_f64();
    if gamma_err.abs() <= tol_gamma && delta_err.abs() <= tol_delta {
        return Verdict::Pass;
    }
    if gamma_err > tol_gamma {
        return Verdict::Fail;
    }
    if gamma_err.abs() <= tol_gamma && delta_err > tol_delta {
        return Verdict::Fail;
    }
    Verdict::Inconclusive
}
