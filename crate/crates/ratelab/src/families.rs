//! Test-function families for operator-norm lower bounds.
//!
//! The mapping norm of exp(-tH) from L^{p,sigma} to L^{q,theta} is
//! estimated from below by evolving a small family of radial data and
//! taking the best ratio of an evolved target norm to a source norm.
//! The family mixes shapes that are extremal in different regimes:
//!
//! * a smooth unit bump, the generic positive datum;
//! * ball indicators at several radii, whose Lorentz norms have closed
//!   forms and whose evolution tracks the heat kernel;
//! * the positive harmonic profile U capped to a ball, which feeds the
//!   r^(-A) inner shape that saturates the target-side log factors at
//!   q = beta = N/A;
//! * when A > 0, a ladder of "dual-critical cores" min(1, r^(A - N))
//!   capped at doubling radii R.  Their rearrangements follow the
//!   critical power m^(-1/alpha) with alpha = N/(N - A) across the
//!   scales up to R, which is what the source-side secondary exponent
//!   sigma sees at p = alpha; a single capped profile only covers
//!   scales up to its radius, so the ladder lets the best member grow
//!   with the measurement time.
//!
//! All members are built on the shared experiment grid so one evolution
//! per member serves every exponent quadruple and anchor time.

use std::sync::Arc;

use lorentz::{RadialFunction, RadialGrid};
use schrodinger::HarmonicProfile;

use crate::RateLabError;

/// Ladder radii for the dual-critical cores: 4, 16, 64, ... capped by
/// the diffusion scale sqrt(t_end), so every member gets a stretch of
/// time during which its core is neither fully resolved nor fully
/// diffused.
pub fn ladder_radii(t_end: f64) -> Vec<f64> {
    let mut radii = Vec::new();
    let mut r = 4.0;
    while r <= t_end.sqrt() {
        radii.push(r);
        r *= 4.0;
    }
    radii
}

/// Radii at which family data jump; the experiment grid needs ramp
/// nodes there so the indicators and caps are representable.  Pass
/// `critical = true` when the potential has a positive decay exponent
/// and the dual-critical ladder will be used.
pub fn family_jump_radii(t_end: f64, critical: bool) -> Vec<f64> {
    let mut radii = vec![1.0, 4.0, 16.0];
    if critical {
        for r in ladder_radii(t_end) {
            if !radii.contains(&r) {
                radii.push(r);
            }
        }
    }
    radii.sort_by(f64::total_cmp);
    radii
}

/// One named initial datum living on the shared experiment grid.
#[derive(Debug, Clone)]
pub struct FamilyMember {
    label: String,
    datum: RadialFunction,
}

impl FamilyMember {
    pub fn new(label: impl Into<String>, datum: RadialFunction) -> Self {
        Self {
            label: label.into(),
            datum,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn datum(&self) -> &RadialFunction {
        &self.datum
    }
}

/// Smooth bump supported in the unit ball with height 1 at the origin.
pub fn unit_bump(grid: &Arc<RadialGrid>) -> Result<RadialFunction, RateLabError> {
    Ok(RadialFunction::from_fn(grid, |r| {
        if r < 1.0 {
            (1.0 - 1.0 / (1.0 - r * r)).exp()
        } else {
            0.0
        }
    })?)
}

/// Indicator of the ball of the given radius, represented with the
/// grid's ramp nodes at the edge.
pub fn ball_member(grid: &Arc<RadialGrid>, radius: f64) -> Result<RadialFunction, RateLabError> {
    Ok(RadialFunction::from_fn(grid, |r| {
        if r <= radius {
            1.0
        } else {
            0.0
        }
    })?)
}

/// The positive harmonic profile capped to a ball; its inner shape is
/// exactly the late-time profile of the semigroup.
pub fn harmonic_cap(
    grid: &Arc<RadialGrid>,
    profile: &HarmonicProfile,
    radius: f64,
) -> Result<RadialFunction, RateLabError> {
    let u = profile.profile();
    Ok(RadialFunction::from_fn(grid, |r| {
        if r <= radius {
            u.eval(r)
        } else {
            0.0
        }
    })?)
}

/// Capped dual-critical core min(1, r^(A - N)) chi_{r <= radius}.  Its
/// rearrangement decays like m^(-(N-A)/N) = m^(-1/alpha) over the
/// scales between 1 and the cap radius.
pub fn dual_critical_core(
    grid: &Arc<RadialGrid>,
    dim: u32,
    decay: f64,
    radius: f64,
) -> Result<RadialFunction, RateLabError> {
    let power = decay - dim as f64;
    Ok(RadialFunction::from_fn(grid, |r| {
        if r <= radius {
            if r <= 1.0 {
                1.0
            } else {
                r.powf(power)
            }
        } else {
            0.0
        }
    })?)
}

/// The default lower-bound family for a run with horizon `t_end`.  The
/// harmonic cap and the dual-critical ladder are included only when the
/// profile genuinely decays (A > 0); for the free and short-range cases
/// they would duplicate the ball indicators.
pub fn extremal_family(
    grid: &Arc<RadialGrid>,
    profile: &HarmonicProfile,
    t_end: f64,
) -> Result<Vec<FamilyMember>, RateLabError> {
    let mut members = vec![FamilyMember::new("unit bump", unit_bump(grid)?)];
    for radius in [1.0, 4.0, 16.0] {
        members.push(FamilyMember::new(
            format!("ball R={radius}"),
            ball_member(grid, radius)?,
        ));
    }
    let decay = profile.decay_exponent();
    if decay > 1e-9 {
        members.push(FamilyMember::new(
            "harmonic cap R=16",
            harmonic_cap(grid, profile, 16.0)?,
        ));
        let dim = grid.dim();
        for radius in ladder_radii(t_end) {
            members.push(FamilyMember::new(
                format!("dual-critical core R={radius}"),
                dual_critical_core(grid, dim, decay, radius)?,
            ));
        }
    }
    Ok(members)
}
