//! Distribution functions and rearrangements of piecewise-linear radial
//! profiles.
//!
//! For a profile that is linear on each grid cell the super-level set
//! { |f| > lambda } is a finite union of radial intervals whose endpoints
//! solve linear equations, so the distribution function is evaluated in
//! closed form cell by cell.  The non-increasing rearrangement is the
//! generalized inverse of the distribution function; it is returned as a
//! piecewise-linear profile in the measure coordinate, refined adaptively
//! until the linear interpolant matches the exact inverse to a small
//! relative tolerance in both the measure and the radius coordinate.

use std::sync::Arc;

use crate::{unit_ball_volume, LorentzError, RadialFunction, RadialGrid};

/// Relative accuracy target for rearrangement breakpoint refinement.
const REFINE_REL_TOL: f64 = 1e-9;
/// Maximum bisection depth per breakpoint interval.  Smooth arcs resolve
/// within ten or so levels; the deep cap lets a vertical jump of the
/// rearrangement collapse to a hairline in the measure coordinate.
const REFINE_MAX_DEPTH: u32 = 52;
/// Slack allowed when deciding that a profile is already non-increasing.
/// Long time-stepped evolutions of decreasing data carry bounded solver
/// roundoff, so the slack must exceed that noise floor for such
/// profiles to keep the cheap monotone path; the envelope it induces
/// differs from |f| by at most this fraction of the maximum, far below
/// every measurement tolerance built on these norms.
const MONOTONE_SLACK_REL: f64 = 1e-8;

/// One signed-linear piece of |f|: values `al -> ar` over `[rl, rr]`,
/// both non-negative.
#[derive(Debug, Clone, Copy)]
struct Piece {
    rl: f64,
    rr: f64,
    al: f64,
    ar: f64,
}

impl Piece {
    /// Volume of { r in [rl, rr] : lin(r) > lam } in R^dim.
    fn measure_above(&self, lam: f64, c_dim: f64, dim: i32) -> f64 {
        let (lo, hi) = if self.al <= self.ar {
            (self.al, self.ar)
        } else {
            (self.ar, self.al)
        };
        if lam >= hi {
            return 0.0;
        }
        let vol = |r: f64| c_dim * r.powi(dim);
        if lam < lo {
            return vol(self.rr) - vol(self.rl);
        }
        // lam in [lo, hi): one crossing inside the piece
        let t = (lam - self.al) / (self.ar - self.al);
        let rc = self.rl + t * (self.rr - self.rl);
        if self.al > self.ar {
            vol(rc) - vol(self.rl)
        } else {
            vol(self.rr) - vol(rc)
        }
    }
}

/// Splits the profile into pieces of constant sign and takes absolute
/// values, so each piece carries a linear segment of |f|.
fn abs_pieces(f: &RadialFunction) -> Vec<Piece> {
    let nodes = f.grid().nodes();
    let values = f.values();
    let mut out = Vec::with_capacity(nodes.len());
    for i in 0..nodes.len() - 1 {
        let (rl, rr) = (nodes[i], nodes[i + 1]);
        let (vl, vr) = (values[i], values[i + 1]);
        if vl * vr < 0.0 {
            let rc = rl + vl / (vl - vr) * (rr - rl);
            out.push(Piece {
                rl,
                rr: rc,
                al: vl.abs(),
                ar: 0.0,
            });
            out.push(Piece {
                rl: rc,
                rr,
                al: 0.0,
                ar: vr.abs(),
            });
        } else {
            out.push(Piece {
                rl,
                rr,
                al: vl.abs(),
                ar: vr.abs(),
            });
        }
    }
    out
}

/// Measure of the super-level set { x in R^N : |f(x)| > lambda }.
///
/// Exact (up to floating-point rounding) for piecewise-linear profiles;
/// the zero extension beyond the grid contributes nothing.
pub fn distribution_function(f: &RadialFunction, lambda: f64) -> Result<f64, LorentzError> {
    if !(lambda >= 0.0) {
        return Err(LorentzError::Domain(format!(
            "distribution function needs lambda >= 0, got {lambda}"
        )));
    }
    let c_dim = unit_ball_volume(f.dim());
    let dim = f.dim() as i32;
    Ok(abs_pieces(f)
        .iter()
        .map(|p| p.measure_above(lambda, c_dim, dim))
        .sum())
}

/// Precomputed super-level geometry of one profile.
struct Rearrangement {
    pieces: Vec<Piece>,
    /// Distinct |node values| sorted decreasing, ending at 0.
    levels: Vec<f64>,
    /// Distribution function at each critical level.
    mu: Vec<f64>,
    c_dim: f64,
    dim: i32,
}

impl Rearrangement {
    fn new(f: &RadialFunction) -> Self {
        let pieces = abs_pieces(f);
        let c_dim = unit_ball_volume(f.dim());
        let dim = f.dim() as i32;
        let mut levels: Vec<f64> = f.values().iter().map(|v| v.abs()).collect();
        levels.push(0.0);
        levels.sort_by(|a, b| b.partial_cmp(a).unwrap());
        levels.dedup();
        let mu = levels
            .iter()
            .map(|&l| {
                pieces
                    .iter()
                    .map(|p| p.measure_above(l, c_dim, dim))
                    .sum::<f64>()
            })
            .collect();
        Self {
            pieces,
            levels,
            mu,
            c_dim,
            dim,
        }
    }

    fn mu_at(&self, lam: f64) -> f64 {
        self.pieces
            .iter()
            .map(|p| p.measure_above(lam, self.c_dim, self.dim))
            .sum()
    }

    /// The non-increasing rearrangement evaluated at measure `s`:
    /// the smallest lambda with mu(lambda) <= s (right-continuous).
    fn quantile(&self, s: f64) -> f64 {
        if s >= *self.mu.last().unwrap() {
            return 0.0;
        }
        // last index with mu[j] <= s; mu is non-decreasing along `levels`
        let j = self.mu.partition_point(|&m| m <= s) - 1;
        let (mut hi, mut lo) = (self.levels[j], self.levels[j + 1]);
        if self.mu_at(lo) <= s {
            return lo;
        }
        for _ in 0..64 {
            let mid = 0.5 * (hi + lo);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.mu_at(mid) <= s {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }
}

/// The non-increasing rearrangement f* on the half-line of measures,
/// stored as a piecewise-linear graph over measure breakpoints
/// 0 = s_0 < s_1 < ... and extended by zero past the last breakpoint.
#[derive(Debug, Clone)]
pub struct DecreasingProfile {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl DecreasingProfile {
    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Measure of the support of the represented profile.
    pub fn total_measure(&self) -> f64 {
        *self.breakpoints.last().unwrap()
    }

    /// Point evaluation at measure `s` (zero past the last breakpoint).
    pub fn eval(&self, s: f64) -> f64 {
        if s < 0.0 || s > self.total_measure() {
            return 0.0;
        }
        let i = match self
            .breakpoints
            .binary_search_by(|x| x.partial_cmp(&s).unwrap())
        {
            Ok(i) => return self.values[i],
            Err(i) => i - 1,
        };
        if i + 1 >= self.breakpoints.len() {
            return self.values[i];
        }
        let (s0, s1) = (self.breakpoints[i], self.breakpoints[i + 1]);
        let t = (s - s0) / (s1 - s0);
        self.values[i] * (1.0 - t) + self.values[i + 1] * t
    }

    /// Distribution function of the represented (piecewise-linear in s)
    /// profile; used to verify equimeasurability against the original.
    pub fn distribution(&self, lambda: f64) -> f64 {
        let mut total = 0.0;
        for i in 0..self.breakpoints.len() - 1 {
            let (s0, s1) = (self.breakpoints[i], self.breakpoints[i + 1]);
            let (v0, v1) = (self.values[i], self.values[i + 1]);
            let (lo, hi) = if v0 <= v1 { (v0, v1) } else { (v1, v0) };
            if lambda >= hi {
                continue;
            }
            if lambda < lo {
                total += s1 - s0;
            } else {
                let t = (lambda - v0) / (v1 - v0);
                let sc = s0 + t * (s1 - s0);
                // values are non-increasing in s, so the part above the
                // level sits to the left of the crossing
                total += sc - s0;
            }
        }
        total
    }
}

/// Shared breakpoint-refinement driver: starting from mandatory measure
/// breakpoints, subdivides every interval until linear interpolation in
/// the measure coordinate and in the radius coordinate both reproduce the
/// exact inverse within the refinement tolerance.
fn refine_breakpoints(
    initial: Vec<f64>,
    quantile: &dyn Fn(f64) -> f64,
    c_dim: f64,
    dim: i32,
    max_abs: f64,
) -> (Vec<f64>, Vec<f64>) {
    let tol = REFINE_REL_TOL * max_abs;
    let radius = |s: f64| (s / c_dim).powf(1.0 / dim as f64);
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(4 * initial.len());
    let mut stack: Vec<(f64, f64, f64, f64, u32)> = Vec::new();
    for w in initial.windows(2) {
        let (sa, sb) = (w[0], w[1]);
        let (va, vb) = (quantile(sa), quantile(sb));
        out.push((sa, va));
        stack.push((sa, va, sb, vb, 0));
        while let Some((s0, v0, s1, v1, depth)) = stack.pop() {
            let sm = 0.5 * (s0 + s1);
            if depth >= REFINE_MAX_DEPTH || sm <= s0 || sm >= s1 {
                continue;
            }
            let vm = quantile(sm);
            let lerp_s = 0.5 * (v0 + v1);
            let (r0, r1, rm) = (radius(s0), radius(s1), radius(sm));
            let lerp_r = if r1 > r0 {
                v0 + (rm - r0) / (r1 - r0) * (v1 - v0)
            } else {
                lerp_s
            };
            if (vm - lerp_s).abs() <= tol && (vm - lerp_r).abs() <= tol {
                continue;
            }
            stack.push((sm, vm, s1, v1, depth + 1));
            stack.push((s0, v0, sm, vm, depth + 1));
            out.push((sm, vm));
        }
    }
    if let Some(&last) = initial.last() {
        out.push((last, quantile(last)));
    }
    out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    out.dedup_by(|a, b| a.0 == b.0);
    let (s, v): (Vec<f64>, Vec<f64>) = out.into_iter().unzip();
    (s, v)
}

fn zero_profile() -> DecreasingProfile {
    DecreasingProfile {
        breakpoints: vec![0.0, 1.0],
        values: vec![0.0, 0.0],
    }
}

/// If |f| is non-increasing up to a tiny relative slack, returns the
/// non-increasing envelope of |f| on the same grid.
///
/// A sign change inside a cell makes |f| kink upward there, so |f| is
/// only piecewise linear on the original grid when no cell has strictly
/// opposite-sign endpoints; such profiles take the general path.
pub(crate) fn monotone_envelope(f: &RadialFunction) -> Option<RadialFunction> {
    let max_abs = f.max_abs();
    let slack = MONOTONE_SLACK_REL * max_abs;
    let values = f.values();
    for w in values.windows(2) {
        if w[0] * w[1] < 0.0 || w[1].abs() > w[0].abs() + slack {
            return None;
        }
    }
    let mut env: Vec<f64> = values.iter().map(|v| v.abs()).collect();
    for i in (0..env.len().saturating_sub(1)).rev() {
        env[i] = env[i].max(env[i + 1]);
    }
    Some(RadialFunction::from_values(Arc::clone(f.grid()), env).expect("envelope is finite"))
}

/// Non-increasing rearrangement of |f| over the measure coordinate.
pub fn decreasing_rearrangement(f: &RadialFunction) -> Result<DecreasingProfile, LorentzError> {
    let c_dim = unit_ball_volume(f.dim());
    let dim = f.dim() as i32;
    let max_abs = f.max_abs();
    if max_abs == 0.0 {
        return Ok(zero_profile());
    }
    if let Some(env) = monotone_envelope(f) {
        // |f| already non-increasing: the rearrangement is f itself read
        // in the measure coordinate s = c_N r^N
        let nodes = env.grid().nodes();
        let initial: Vec<f64> = nodes.iter().map(|&r| c_dim * r.powi(dim)).collect();
        let q = move |s: f64| env.eval((s / c_dim).powf(1.0 / dim as f64));
        let (s, v) = refine_breakpoints(initial, &q, c_dim, dim, max_abs);
        return Ok(DecreasingProfile {
            breakpoints: s,
            values: v,
        });
    }
    let re = Rearrangement::new(f);
    let mut initial: Vec<f64> = re.mu.clone();
    initial.push(0.0);
    initial.sort_by(|a, b| a.partial_cmp(b).unwrap());
    initial.dedup();
    let q = |s: f64| re.quantile(s);
    let (s, v) = refine_breakpoints(initial, &q, c_dim, dim, max_abs);
    Ok(DecreasingProfile {
        breakpoints: s,
        values: v,
    })
}

/// Spherical rearrangement f#: the radial, non-increasing profile
/// equimeasurable with |f|, i.e. f#(x) = f*(c_N |x|^N).
///
/// For profiles with |f| already non-increasing this returns |f| itself
/// (no resampling); otherwise the rearrangement breakpoints are mapped
/// back to radii.
pub fn spherical_rearrangement(f: &RadialFunction) -> Result<RadialFunction, LorentzError> {
    if f.max_abs() == 0.0 {
        return Ok(f.abs());
    }
    if let Some(env) = monotone_envelope(f) {
        return Ok(env);
    }
    let profile = decreasing_rearrangement(f)?;
    let c_dim = unit_ball_volume(f.dim());
    let inv_dim = 1.0 / f.dim() as f64;
    let mut nodes: Vec<f64> = Vec::with_capacity(profile.breakpoints.len());
    let mut values: Vec<f64> = Vec::with_capacity(profile.breakpoints.len());
    for (&s, &v) in profile.breakpoints.iter().zip(&profile.values) {
        let r = (s / c_dim).powf(inv_dim);
        if let Some(&last) = nodes.last() {
            if !(r > last) {
                continue;
            }
        }
        nodes.push(r);
        values.push(v);
    }
    if nodes.len() < 2 {
        return Ok(f.abs());
    }
    let grid = Arc::new(RadialGrid::from_nodes(f.dim(), nodes)?);
    RadialFunction::from_values(grid, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    #[test]
    fn ball_indicator_distribution_is_the_ball_volume() {
        // 2 * indicator of the unit ball in R^3: every level below 2 sees
        // the full ball
        let f = RadialFunction::ball_indicator(3, 1.0, 2.0).unwrap();
        let c3 = 4.0 * std::f64::consts::PI / 3.0;
        let mu1 = distribution_function(&f, 1.0).unwrap();
        assert!(
            (mu1 - c3).abs() < 1e-9 * c3,
            "mu(1) = {mu1}, expected {c3}"
        );
        assert_eq!(distribution_function(&f, 2.5).unwrap(), 0.0);
        let mu0 = distribution_function(&f, 0.0).unwrap();
        assert!((mu0 - c3).abs() < 1e-9 * c3);
    }

    #[test]
    fn tent_distribution_matches_hand_computation() {
        // f(r) = max(0, 1 - r) in R^2: { f > 1/2 } is the disc of radius
        // 1/2, area pi/4
        let grid = Arc::new(RadialGrid::from_nodes(2, vec![0.0, 1.0, 2.0]).unwrap());
        let f = RadialFunction::from_values(grid, vec![1.0, 0.0, 0.0]).unwrap();
        let mu = distribution_function(&f, 0.5).unwrap();
        let expected = std::f64::consts::PI * 0.25;
        assert!(
            (mu - expected).abs() < 1e-12,
            "mu(1/2) = {mu}, expected {expected}"
        );
    }

    #[test]
    fn annulus_rearranges_to_the_equal_volume_ball() {
        // indicator of 1 <= |x| <= 2 in R^3 has volume c_3 (8 - 1); the
        // rearranged profile is the indicator of a ball of radius 7^(1/3)
        let f = RadialFunction::annulus_indicator(3, 1.0, 2.0, 1.0).unwrap();
        let sharp = spherical_rearrangement(&f).unwrap();
        let r_star = 7.0f64.powf(1.0 / 3.0);
        for (r, expected) in [
            (0.5, 1.0),
            (1.2, 1.0),
            (r_star * 0.999999, 1.0),
            (r_star * 1.000001, 0.0),
            (2.5, 0.0),
        ] {
            let got = sharp.eval(r);
            assert!(
                (got - expected).abs() < 1e-6,
                "f#({r}) = {got}, expected {expected}"
            );
        }
    }

    #[test]
    fn increasing_ramp_rearrangement_spot_value() {
        // f(r) = r on [0, 1] in R^2: mu(lam) = pi (1 - lam^2), so
        // f*(3 pi / 4) = 1/2
        let grid = Arc::new(
            RadialGrid::from_nodes(2, vec![0.0, 1.0, 1.0 + 1e-12]).unwrap(),
        );
        let f = RadialFunction::from_values(grid, vec![0.0, 1.0, 0.0]).unwrap();
        let star = decreasing_rearrangement(&f).unwrap();
        let got = star.eval(0.75 * std::f64::consts::PI);
        assert!((got - 0.5).abs() < 1e-7, "f*(3 pi/4) = {got}");
        let mu = distribution_function(&f, 0.6).unwrap();
        let expected = std::f64::consts::PI * (1.0 - 0.36);
        assert!((mu - expected).abs() < 1e-9);
    }

    #[test]
    fn rearrangement_of_monotone_profile_is_identity() {
        let grid = Arc::new(RadialGrid::from_nodes(3, vec![0.0, 0.5, 1.0, 2.0]).unwrap());
        let f = RadialFunction::from_values(grid, vec![2.0, 1.0, 0.5, 0.0]).unwrap();
        let sharp = spherical_rearrangement(&f).unwrap();
        assert_eq!(sharp.values(), f.values());
    }
}
