//! Decay-rate extraction from sampled norm curves.
//!
//! The model is v(t) = C t^gamma (log t)^delta exp(eta / t).  Taking
//! logarithms, ln v = ln C + gamma ln t + delta ln ln t + eta / t, so
//! the exponents come from one linear least-squares problem.  The 1/t
//! regressor is a nuisance term: measured envelopes relax onto their
//! power-log asymptote through a leading correction that decays like
//! 1/t, and without the term that correction aliases into the log power
//! with a lever arm of several units per percent of residual droop.  On
//! data that follows the power-log model exactly the term fits to zero
//! and costs nothing.
//!
//! The regressors ln t and ln ln t are nearly collinear: over a finite
//! window ln ln t is well approximated by an affine function of ln t.
//! The fit therefore demands at least four decades of data reaching
//! past t = 100, drops everything below t = 100 before regressing on
//! ln ln t, and refuses to report a log power at all when the ln ln t
//! spread in the regression window is too small to separate the two
//! regressors.

use heatflow::EvolutionTrace;
use lorentz::{Exponent, LorentzExponents};

use crate::{NormCurve, RateLabError};

/// Minimum ratio t_hi / t_lo of the sampled window.
pub const MIN_WINDOW_RATIO: f64 = 1e4;

/// The window must reach at least this far for the asymptotics to have
/// set in.
pub const MIN_WINDOW_END: f64 = 1e2;

/// The log-power stage ignores samples below max of this floor and
/// `DELTA_WINDOW_FRACTION` times the window end: early times mix
/// startup transients into the region where ln ln t has most of its
/// curvature, and even a few percent of unrelaxed envelope there reads
/// as a spurious log power of several tenths.
pub const DELTA_WINDOW_FLOOR: f64 = 100.0;
pub const DELTA_WINDOW_FRACTION: f64 = 1e-4;

/// Smallest spread of ln ln t over the regression window for which the
/// power and log-power regressors are still distinguishable.
pub const MIN_LOGLOG_SPREAD: f64 = 0.5;

/// Fitted envelope exponents for one curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateFit {
    gamma: f64,
    delta: Option<f64>,
    intercept: f64,
    transient: f64,
    residual_rms: f64,
    window: (f64, f64),
    ill_conditioned: bool,
}

impl RateFit {
    /// Fitted power of t.
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Fitted power of log t, absent when the window cannot resolve it.
    pub fn delta(&self) -> Option<f64> {
        self.delta
    }

    /// Fitted ln of the constant prefactor.
    pub fn intercept(&self) -> f64 {
        self.intercept
    }

    /// Fitted coefficient of the 1/t relaxation term, zero when the
    /// log-power stage was skipped.
    pub fn transient(&self) -> f64 {
        self.transient
    }

    /// Root-mean-square residual of ln v over the regression window.
    pub fn residual_rms(&self) -> f64 {
        self.residual_rms
    }

    /// Full extent (t_lo, t_hi) of the sampled curve.
    pub fn window(&self) -> (f64, f64) {
        self.window
    }

    /// True when the log-power stage was skipped because the regressors
    /// were too collinear over the window.
    pub fn ill_conditioned(&self) -> bool {
        self.ill_conditioned
    }
}

/// Ordinary least squares y = a + b x; requires a nonzero spread in x.
fn ols_line(points: &[(f64, f64)]) -> Result<(f64, f64), RateLabError> {
    if points.len() < 2 {
        return Err(RateLabError::TooFewSamples {
            need: 2,
            got: points.len(),
        });
    }
    let n = points.len() as f64;
    let mean_x = points.iter().map(|(x, _)| x).sum::<f64>() / n;
    let mean_y = points.iter().map(|(_, y)| y).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|(x, _)| (x - mean_x).powi(2)).sum();
    let sxy: f64 = points
        .iter()
        .map(|(x, y)| (x - mean_x) * (y - mean_y))
        .sum();
    if sxx == 0.0 {
        return Err(RateLabError::BadSampleTimes(
            "regression abscissas are all equal".to_string(),
        ));
    }
    let b = sxy / sxx;
    Ok((mean_y - b * mean_x, b))
}

/// Fits ln v = a + gamma ln t + delta ln ln t to a sampled curve.
///
/// Stage one estimates gamma alone from the top two decades, where any
/// log factor is closest to constant.  Stage two re-fits gamma, delta,
/// and the 1/t relaxation coefficient jointly on the samples past the
/// early-time cut.  When the window cannot separate the regressors the
/// result keeps the stage-one power, reports no log power, and is
/// flagged ill conditioned.
pub fn fit_series(samples: &[(f64, f64)]) -> Result<RateFit, RateLabError> {
    if samples.len() < 5 {
        return Err(RateLabError::TooFewSamples {
            need: 5,
            got: samples.len(),
        });
    }
    for &(t, v) in samples {
        if !(t > 0.0 && t.is_finite()) {
            return Err(RateLabError::BadSampleTimes(format!(
                "sample time {} is not positive and finite",
                t
            )));
        }
        if !(v > 0.0 && v.is_finite()) {
            return Err(RateLabError::BadEstimate { t, value: v });
        }
    }
    let t_lo = samples.iter().map(|(t, _)| *t).fold(f64::INFINITY, f64::min);
    let t_hi = samples.iter().map(|(t, _)| *t).fold(0.0, f64::max);
    if t_hi / t_lo < MIN_WINDOW_RATIO * (1.0 - 1e-9) || t_hi < MIN_WINDOW_END {
        return Err(RateLabError::ShortWindow { t_lo, t_hi });
    }

    // Stage one: pure power over the top two decades.
    let late: Vec<(f64, f64)> = samples
        .iter()
        .filter(|(t, _)| *t >= 0.01 * t_hi * (1.0 - 1e-9))
        .map(|&(t, v)| (t.ln(), v.ln()))
        .collect();
    let (late_intercept, late_gamma) = ols_line(&late)?;

    // Stage two: joint fit past the early-time cut, with the 1/t
    // relaxation term as a nuisance regressor.
    let cut = DELTA_WINDOW_FLOOR.max(DELTA_WINDOW_FRACTION * t_hi);
    let window: Vec<(f64, f64, f64, f64)> = samples
        .iter()
        .filter(|(t, _)| *t >= cut * (1.0 - 1e-9))
        .map(|&(t, v)| (t.ln(), t.ln().ln(), 1.0 / t, v.ln()))
        .collect();
    if window.len() < 5 {
        return Err(RateLabError::TooFewSamples {
            need: 5,
            got: window.len(),
        });
    }
    let fallback = |late: &[(f64, f64)]| {
        let rms = (late
            .iter()
            .map(|(x, y)| (y - late_intercept - late_gamma * x).powi(2))
            .sum::<f64>()
            / late.len() as f64)
            .sqrt();
        RateFit {
            gamma: late_gamma,
            delta: None,
            intercept: late_intercept,
            transient: 0.0,
            residual_rms: rms,
            window: (t_lo, t_hi),
            ill_conditioned: true,
        }
    };
    let spread = window
        .iter()
        .map(|(_, w, _, _)| *w)
        .fold(f64::NEG_INFINITY, f64::max)
        - window
            .iter()
            .map(|(_, w, _, _)| *w)
            .fold(f64::INFINITY, f64::min);
    if spread < MIN_LOGLOG_SPREAD {
        return Ok(fallback(&late));
    }

    let n = window.len() as f64;
    let mean_x = window.iter().map(|(x, _, _, _)| x).sum::<f64>() / n;
    let mean_w = window.iter().map(|(_, w, _, _)| w).sum::<f64>() / n;
    let mean_d = window.iter().map(|(_, _, d, _)| d).sum::<f64>() / n;
    let mean_y = window.iter().map(|(_, _, _, y)| y).sum::<f64>() / n;
    let mut s = [[0.0f64; 3]; 3];
    let mut r = [0.0f64; 3];
    for &(x, w, d, y) in &window {
        let dev = [x - mean_x, w - mean_w, d - mean_d];
        let dy = y - mean_y;
        for i in 0..3 {
            for j in 0..3 {
                s[i][j] += dev[i] * dev[j];
            }
            r[i] += dev[i] * dy;
        }
    }
    let minor = |a: usize, b: usize, c: usize, d: usize| s[a][c] * s[b][d] - s[a][d] * s[b][c];
    let det = s[0][0] * minor(1, 2, 1, 2) - s[0][1] * minor(1, 2, 0, 2) + s[0][2] * minor(1, 2, 0, 1);
    if !(det > 1e-12 * s[0][0] * s[1][1] * s[2][2]) {
        return Ok(fallback(&late));
    }
    let solve_col = |col: usize| {
        let mut m = s;
        for (row, value) in m.iter_mut().zip(r) {
            row[col] = value;
        }
        (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))
            / det
    };
    let gamma = solve_col(0);
    let delta = solve_col(1);
    let transient = solve_col(2);
    let intercept = mean_y - gamma * mean_x - delta * mean_w - transient * mean_d;
    let rms = (window
        .iter()
        .map(|(x, w, d, y)| (y - intercept - gamma * x - delta * w - transient * d).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    Ok(RateFit {
        gamma,
        delta: Some(delta),
        intercept,
        transient,
        residual_rms: rms,
        window: (t_lo, t_hi),
        ill_conditioned: false,
    })
}

/// Fits the envelope exponents of a lower-bound curve.
pub fn fit_rate(curve: &NormCurve) -> Result<RateFit, RateLabError> {
    fit_series(&curve.sample_pairs())
}

/// Fits the growth of the mass norm along an evolution, from t = 1 on.
/// For the critical-decay potentials the mass norm grows like a power
/// of t, so the same envelope model applies.
pub fn l1_growth(trace: &EvolutionTrace) -> Result<RateFit, RateLabError> {
    let mass = LorentzExponents::diagonal(Exponent::ONE);
    let series = trace
        .lorentz_series(mass)
        .ok_or_else(|| RateLabError::MissingObservable(format!("{}", mass)))?;
    let late: Vec<(f64, f64)> = series.into_iter().filter(|(t, _)| *t >= 1.0).collect();
    fit_series(&late)
}
