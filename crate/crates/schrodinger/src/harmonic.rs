//! The positive harmonic profile U of a radial potential.
//!
//! U solves U'' + (N-1)/r U' = V U with U(0) = 1, U'(0) = 0 and behaves
//! like r^(-A) at infinity.  The solver integrates the flux form
//!
//!   U' = W / r^(N-1),     W' = r^(N-1) V U,
//!
//! outward from a two-term Taylor start (the 1/r coefficient is
//! removable at the origin only through the series), estimates A by a
//! log-log least-squares fit over the outermost decade of the grid, and
//! normalizes the profile so that r^A U(r) -> 1 there.

use std::sync::Arc;

use lorentz::{LorentzError, RadialFunction, RadialGrid};
use thiserror::Error;

use crate::ode::{integrate_radial, OdeError};
use crate::potential::{branch_exponents, Potential, PotentialError};

/// Largest acceptable RMS residual of the tail fit in solve_harmonic;
/// larger residuals mean the tail has not reached its power law.
pub const TAIL_RESIDUAL_TOL: f64 = 0.05;

#[derive(Debug, Error)]
pub enum HarmonicError {
    #[error(transparent)]
    Ode(#[from] OdeError),
    #[error(transparent)]
    Potential(#[from] PotentialError),
    #[error(transparent)]
    Grid(#[from] LorentzError),
    #[error("harmonic profile is not positive: U({r}) = {value}")]
    NonPositive { r: f64, value: f64 },
    #[error("grid dimension {grid} does not match potential dimension {potential}")]
    DimensionMismatch { grid: u32, potential: u32 },
    #[error("tail window holds only {count} usable nodes, need at least {need}")]
    TailNotResolved { count: usize, need: usize },
    #[error("tail fit residual {residual} exceeds tolerance {tolerance}")]
    TailFitResidual { residual: f64, tolerance: f64 },
    #[error("estimated exponent {exponent} violates the hypothesis A < {limit}")]
    ExponentHypothesis { exponent: f64, limit: f64 },
}

/// Least-squares description of a power-law tail U ~ amplitude * r^(-exponent).
#[derive(Debug, Clone, Copy)]
pub struct DecayEstimate {
    pub exponent: f64,
    pub amplitude: f64,
    pub residual: f64,
}

/// Positive harmonic profile with its fitted decay exponent.
#[derive(Debug, Clone)]
pub struct HarmonicProfile {
    profile: RadialFunction,
    decay_exponent: f64,
    fit_residual: f64,
    critical: bool,
}

impl HarmonicProfile {
    /// The profile, normalized so r^A U(r) -> 1 over the fit window.
    pub fn profile(&self) -> &RadialFunction {
        &self.profile
    }

    pub fn into_profile(self) -> RadialFunction {
        self.profile
    }

    /// Fitted decay exponent A (negative for growing profiles).
    pub fn decay_exponent(&self) -> f64 {
        self.decay_exponent
    }

    /// RMS residual of the log-log tail fit.
    pub fn fit_residual(&self) -> f64 {
        self.fit_residual
    }

    /// Whether A sits on the larger root of the indicial equation.
    pub fn is_critical(&self) -> bool {
        self.critical
    }
}

/// Fit U ~ amplitude * r^(-exponent) over the outermost decade of the
/// grid by ordinary least squares of log U against log r.  Fails when
/// the window is too thin, the profile is not positive there, or the
/// residual exceeds `residual_tol`.
pub fn estimate_decay_exponent(
    profile: &RadialFunction,
    residual_tol: f64,
) -> Result<DecayEstimate, HarmonicError> {
    let r_max = profile.grid().r_max();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (&r, &u) in profile.grid().nodes().iter().zip(profile.values()) {
        if r >= 0.1 * r_max && r > 0.0 {
            if u <= 0.0 {
                return Err(HarmonicError::NonPositive { r, value: u });
            }
            xs.push(r.ln());
            ys.push(u.ln());
        }
    }
    let need = 8;
    if xs.len() < need {
        return Err(HarmonicError::TailNotResolved {
            count: xs.len(),
            need,
        });
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let d = y - (intercept + slope * x);
            d * d
        })
        .sum::<f64>()
        / n)
        .sqrt();
    if residual > residual_tol {
        return Err(HarmonicError::TailFitResidual {
            residual,
            tolerance: residual_tol,
        });
    }
    Ok(DecayEstimate {
        exponent: -slope,
        amplitude: intercept.exp(),
        residual,
    })
}

/// Integrate the harmonic profile of `potential` outward over `grid`,
/// estimate its decay exponent from the outermost decade, and normalize
/// so the fitted amplitude is one.  Fails if U loses positivity (the
/// operator has negative spectrum at this resolution) or the tail is
/// not yet asymptotic.
pub fn solve_harmonic(
    potential: &Potential,
    grid: &Arc<RadialGrid>,
) -> Result<HarmonicProfile, HarmonicError> {
    let dim = grid.dim();
    if let Some(d) = potential.dim() {
        if d != dim {
            return Err(HarmonicError::DimensionMismatch {
                grid: dim,
                potential: d,
            });
        }
    }
    if matches!(potential, Potential::Zero) {
        let ones = vec![1.0; grid.len()];
        return Ok(HarmonicProfile {
            profile: RadialFunction::from_values(Arc::clone(grid), ones)?,
            decay_exponent: 0.0,
            fit_residual: 0.0,
            critical: false,
        });
    }

    let n = dim as f64;
    let nodes = grid.nodes();
    let first_positive = nodes
        .iter()
        .copied()
        .find(|&r| r > 0.0)
        .ok_or(OdeError::BadOutputs)?;
    let r0 = 0.5 * first_positive.min(2e-3);
    // Taylor start U = 1 + c2 r^2 + c4 r^4 with the curvature of V taken
    // from a finite difference (V is even in r for every kind here)
    let v0 = potential.eval(0.0);
    let v2 = (potential.eval(r0) - v0) / (r0 * r0);
    let c2 = v0 / (2.0 * n);
    let c4 = (v2 + v0 * c2) / (4.0 * n + 8.0);
    let taylor_u = |r: f64| 1.0 + c2 * r * r + c4 * r * r * r * r;
    let taylor_w = |r: f64| 2.0 * c2 * r.powi(dim as i32) + 4.0 * c4 * r.powi(dim as i32 + 2);

    let outputs: Vec<f64> = nodes.iter().copied().filter(|&r| r > r0).collect();
    let rhs = |r: f64, y: [f64; 2]| {
        let a = r.powi(dim as i32 - 1);
        [y[1] / a, a * potential.eval(r) * y[0]]
    };
    let sol = integrate_radial(rhs, (r0, [taylor_u(r0), taylor_w(r0)]), &outputs, 1e-11)?;

    let mut values = Vec::with_capacity(nodes.len());
    let mut states = sol.states.iter();
    for &r in nodes {
        let u = if r > r0 {
            states.next().expect("one state per output radius")[0]
        } else {
            taylor_u(r)
        };
        if u <= 0.0 {
            return Err(HarmonicError::NonPositive { r, value: u });
        }
        values.push(u);
    }

    let raw = RadialFunction::from_values(Arc::clone(grid), values)?;
    let est = estimate_decay_exponent(&raw, TAIL_RESIDUAL_TOL)?;
    if est.exponent >= 0.5 * n {
        return Err(HarmonicError::ExponentHypothesis {
            exponent: est.exponent,
            limit: 0.5 * n,
        });
    }
    let mut profile = raw;
    for v in profile.values_mut() {
        *v /= est.amplitude;
    }
    let critical = match potential.prescribed_critical() {
        Some(flag) => flag,
        None => match branch_exponents(dim, potential.omega()) {
            Ok((lo, hi)) => (est.exponent - hi).abs() < (est.exponent - lo).abs(),
            Err(_) => est.exponent > 0.5 * (n - 2.0),
        },
    };
    Ok(HarmonicProfile {
        profile,
        decay_exponent: est.exponent,
        fit_residual: est.residual,
        critical,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(dim: u32, r_max: f64) -> Arc<RadialGrid> {
        Arc::new(RadialGrid::uniform_geometric(dim, 0.01, 10.0, 1.02, r_max).unwrap())
    }

    #[test]
    fn zero_potential_gives_the_constant_profile() {
        let g = grid(3, 50.0);
        let h = solve_harmonic(&Potential::Zero, &g).unwrap();
        assert_eq!(h.decay_exponent(), 0.0);
        assert!(h.profile().values().iter().all(|&v| v == 1.0));
        assert!(!h.is_critical());
    }

    #[test]
    fn ground_state_profile_matches_the_closed_form() {
        // the fit window must sit far enough out that the curvature of
        // log U bends the fitted amplitude by less than the tolerance
        let g = grid(3, 3e4);
        let v = Potential::ground_state(3, 1.0).unwrap();
        let h = solve_harmonic(&v, &g).unwrap();
        assert!((h.decay_exponent() - 1.0).abs() < 1e-3);
        assert!(h.is_critical());
        for (&r, &u) in g.nodes().iter().zip(h.profile().values()) {
            let exact = (1.0 + r * r).powf(-0.5);
            assert!(
                (u - exact).abs() <= 1e-6 * exact,
                "r = {r}: {u} vs {exact}"
            );
        }
    }

    #[test]
    fn logarithmic_slope_settles_at_the_decay_exponent() {
        let g = grid(3, 1e4);
        let v = Potential::ground_state(3, 1.0).unwrap();
        let h = solve_harmonic(&v, &g).unwrap();
        let nodes = g.nodes();
        let values = h.profile().values();
        for i in 0..nodes.len() - 1 {
            let rm = 0.5 * (nodes[i] + nodes[i + 1]);
            if rm < 100.0 {
                continue;
            }
            // r U'/U, with U' from the log difference between nodes
            let ratio = rm * (values[i + 1].ln() - values[i].ln()) / (nodes[i + 1] - nodes[i]);
            assert!((ratio + 1.0).abs() <= 0.01, "r = {rm}: slope {ratio}");
        }
    }

    #[test]
    fn estimate_handles_constant_and_growing_profiles() {
        let g = grid(3, 1e3);
        let ones = RadialFunction::from_fn(&g, |_| 1.0).unwrap();
        let est = estimate_decay_exponent(&ones, 0.05).unwrap();
        assert_eq!(est.exponent, 0.0);
        assert_eq!(est.residual, 0.0);

        let growing = RadialFunction::from_fn(&g, |r| (1.0 + r).powf(0.5)).unwrap();
        let est = estimate_decay_exponent(&growing, 0.05).unwrap();
        assert!((est.exponent + 0.5).abs() <= 0.01, "got {}", est.exponent);
    }

    #[test]
    fn estimate_recovers_the_closed_form_tail() {
        let g = grid(3, 1e3);
        let f = RadialFunction::from_fn(&g, |r| (1.0 + r * r).powf(-0.5)).unwrap();
        let est = estimate_decay_exponent(&f, 0.05).unwrap();
        assert!((est.exponent - 1.0).abs() <= 0.01);
        assert!((est.amplitude - 1.0).abs() <= 0.01);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let g = grid(4, 50.0);
        let v = Potential::ground_state(3, 1.0).unwrap();
        assert!(matches!(
            solve_harmonic(&v, &g),
            Err(HarmonicError::DimensionMismatch { .. })
        ));
    }
}
