//! Two-exponent Lorentz norms of radial profiles.
//!
//! With f# the spherical rearrangement and s the secondary exponent, the
//! norm computed here is
//!
//!   ||f||_{p,s} = ( N c_N int_0^inf r^(N s / p - 1) f#(r)^s dr )^(1/s)
//!
//! for finite s, and sup_r r^(N/p) f#(r) at s = infinity; p = s =
//! infinity degenerates to the sup norm.  Profiles whose |f| is already
//! non-increasing skip the rearrangement entirely, so the common solver
//! path never resamples.

use crate::quadrature::{cell_weighted_power, cell_weighted_sup};
use crate::rearrange::monotone_envelope;
use crate::{
    spherical_rearrangement, unit_ball_volume, Exponent, LorentzError, LorentzExponents,
    RadialFunction,
};

/// Non-increasing representative of |f|: |f| itself when possible, the
/// spherical rearrangement otherwise.
fn sharp_view(f: &RadialFunction) -> Result<RadialFunction, LorentzError> {
    match monotone_envelope(f) {
        Some(env) => Ok(env),
        None => spherical_rearrangement(f),
    }
}

fn norm_of_sharp(sharp: &RadialFunction, ex: LorentzExponents) -> f64 {
    let dim = sharp.dim() as f64;
    let c_dim = unit_ball_volume(sharp.dim());
    let nodes = sharp.grid().nodes();
    let values = sharp.values();
    let p = ex.principal().as_f64();
    match ex.secondary() {
        Exponent::Infinity => {
            let c = dim / p;
            let mut best = 0.0_f64;
            for i in 0..nodes.len() - 1 {
                best = best.max(cell_weighted_sup(
                    nodes[i],
                    nodes[i + 1],
                    values[i],
                    values[i + 1],
                    c,
                ));
            }
            best
        }
        s => {
            let sf = s.as_f64();
            let e = dim * sf / p;
            let mut total = 0.0;
            for i in 0..nodes.len() - 1 {
                total += cell_weighted_power(
                    nodes[i],
                    nodes[i + 1],
                    values[i],
                    values[i + 1],
                    e,
                    sf,
                );
            }
            (dim * c_dim * total).powf(1.0 / sf)
        }
    }
}

/// Lorentz norm ||f||_{p,s} of a piecewise-linear radial profile.
pub fn lorentz_norm(f: &RadialFunction, ex: LorentzExponents) -> Result<f64, LorentzError> {
    if f.max_abs() == 0.0 {
        return Ok(0.0);
    }
    if !ex.principal().is_finite() {
        return Ok(f.max_abs());
    }
    let sharp = sharp_view(f)?;
    Ok(norm_of_sharp(&sharp, ex))
}

/// Lebesgue norm ||f||_p computed directly from |f| without any
/// rearrangement; must agree with `lorentz_norm` at s = p.
pub fn lp_norm(f: &RadialFunction, p: Exponent) -> Result<f64, LorentzError> {
    if f.max_abs() == 0.0 {
        return Ok(0.0);
    }
    let pf = match p {
        Exponent::Infinity => return Ok(f.max_abs()),
        q => q.as_f64(),
    };
    let dim = f.dim() as f64;
    let c_dim = unit_ball_volume(f.dim());
    let nodes = f.grid().nodes();
    let values = f.values();
    let mut total = 0.0;
    for i in 0..nodes.len() - 1 {
        let (rl, rr) = (nodes[i], nodes[i + 1]);
        let (vl, vr) = (values[i], values[i + 1]);
        if vl * vr < 0.0 {
            // split the cell where f changes sign so |f| stays linear
            let rc = rl + vl / (vl - vr) * (rr - rl);
            total += cell_weighted_power(rl, rc, vl.abs(), 0.0, dim, pf);
            total += cell_weighted_power(rc, rr, 0.0, vr.abs(), dim, pf);
        } else {
            total += cell_weighted_power(rl, rr, vl.abs(), vr.abs(), dim, pf);
        }
    }
    Ok((dim * c_dim * total).powf(1.0 / pf))
}

/// Norms of the two pieces of f cut at the radius `cutoff_radius`.
#[derive(Debug, Clone, Copy)]
pub struct TruncatedNorms {
    /// Norm of f restricted to the ball of radius `cutoff_radius`.
    pub inner: f64,
    /// Norm of f restricted to the complement of that ball.
    pub outer: f64,
    /// Radius at which the profile was cut.
    pub cutoff_radius: f64,
}

/// Splits f at the given radius and measures both pieces in the same
/// Lorentz norm; the cut itself is a hairline ramp, so inner and outer
/// overlap only on a set of relative width `JUMP_WIDTH_REL`.
pub fn truncated_norms(
    f: &RadialFunction,
    ex: LorentzExponents,
    cutoff_radius: f64,
) -> Result<TruncatedNorms, LorentzError> {
    if !(cutoff_radius > 0.0) || !cutoff_radius.is_finite() {
        return Err(LorentzError::Domain(format!(
            "truncation radius must be positive and finite, got {cutoff_radius}"
        )));
    }
    let inner = lorentz_norm(&f.restrict_inside(cutoff_radius)?, ex)?;
    let outer = lorentz_norm(&f.restrict_outside(cutoff_radius)?, ex)?;
    Ok(TruncatedNorms {
        inner,
        outer,
        cutoff_radius,
    })
}
