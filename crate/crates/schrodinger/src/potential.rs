//! Radial potentials with inverse-square tails.
//!
//! Every potential here is C^1 on [0, infinity), finite at the origin,
//! and satisfies r^2 V(r) -> omega as r -> infinity with an O(r^-2)
//! correction.  The tail coefficient omega controls the decay exponent
//! of the positive harmonic profile through the indicial equation
//! A^2 - (N-2) A - omega = 0, whose two roots are the subcritical and
//! critical branch exponents.  Real branches require the Hardy bound
//! omega > -(N-2)^2/4.
//!
//! Potentials with a prescribed exponent A are synthesized by the
//! ground-state construction: V is the radial Laplacian of
//! U_A(r) = (1+r^2)^(-A/2) divided by U_A, which makes -Laplace + V
//! nonnegative with U_A as an explicit harmonic function.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Half-width of the exclusion band around the decay exponent (N-2)/2,
/// where the two branch exponents collide and the tail analysis breaks.
pub const DECAY_GUARD: f64 = 1e-3;

#[derive(Debug, Error)]
pub enum PotentialError {
    #[error("dimension must be at least 1, got {0}")]
    BadDimension(u32),
    #[error("decay exponent {decay} outside the open interval (0, {max})")]
    DecayOutOfRange { decay: f64, max: f64 },
    #[error(
        "decay exponent {decay} is within the guard band {guard} around \
         the excluded value {excluded}"
    )]
    DecayAtBranchCollision {
        decay: f64,
        excluded: f64,
        guard: f64,
    },
    #[error(
        "tail coefficient {omega} is at or below the Hardy bound {bound} \
         in dimension {dim}"
    )]
    BelowHardyBound { omega: f64, bound: f64, dim: u32 },
    #[error("cutoff scale must be positive and finite, got {0}")]
    BadScale(f64),
    #[error("value must be finite, got {0}")]
    NotFinite(f64),
    #[error("probe dimension {probe} does not match potential dimension {potential}")]
    DimensionMismatch { probe: u32, potential: u32 },
    #[error("probe is identically zero")]
    ZeroProbe,
    #[error("probe must vanish at the outer grid boundary, got {0}")]
    ProbeBoundary(f64),
}

/// Lower bound on admissible tail coefficients: -(N-2)^2/4.
pub fn hardy_bound(dim: u32) -> f64 {
    let m = dim as f64 - 2.0;
    -0.25 * m * m
}

/// The two roots (subcritical, critical) of A^2 - (N-2) A = omega,
///
///   A = (N - 2 -/+ sqrt((N-2)^2 + 4 omega)) / 2,
///
/// the possible decay exponents of a positive harmonic profile with this
/// tail coefficient.  Fails when omega is at or below the Hardy bound,
/// where the discriminant is nonpositive.
pub fn branch_exponents(dim: u32, omega: f64) -> Result<(f64, f64), PotentialError> {
    if dim == 0 {
        return Err(PotentialError::BadDimension(dim));
    }
    if !omega.is_finite() {
        return Err(PotentialError::NotFinite(omega));
    }
    let m = dim as f64 - 2.0;
    let disc = m * m + 4.0 * omega;
    if disc <= 0.0 {
        return Err(PotentialError::BelowHardyBound {
            omega,
            bound: hardy_bound(dim),
            dim,
        });
    }
    let root = disc.sqrt();
    Ok((0.5 * (m - root), 0.5 * (m + root)))
}

/// Threshold Lebesgue exponents (N/(N-A), N/A) attached to a decay
/// exponent A in (0, N/2); they satisfy 1 < alpha < 2 < beta and are
/// Holder conjugate.
pub fn alpha_beta(dim: u32, decay: f64) -> Result<(f64, f64), PotentialError> {
    if dim == 0 {
        return Err(PotentialError::BadDimension(dim));
    }
    let n = dim as f64;
    if !(decay > 0.0 && decay < 0.5 * n) {
        return Err(PotentialError::DecayOutOfRange {
            decay,
            max: 0.5 * n,
        });
    }
    let alpha = n / (n - decay);
    let beta = n / decay;
    debug_assert!(1.0 < alpha && alpha < 2.0 && 2.0 < beta);
    debug_assert!((1.0 / alpha + 1.0 / beta - 1.0).abs() < 1e-12);
    Ok((alpha, beta))
}

/// A radial potential V(r), in units of 1/length^2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Potential {
    /// The free case V = 0.
    Zero,
    /// V = (Laplace U_A)/U_A for U_A(r) = (1+r^2)^(-A/2): explicitly
    ///
    ///   V(r) = (A (A+2-N) r^2 - A N) / (1+r^2)^2,
    ///
    /// with tail coefficient omega = A (A - N + 2).  The operator
    /// -Laplace + V is nonnegative by the ground-state representation
    /// and has the exact harmonic profile U_A.
    GroundState { dim: u32, decay: f64 },
    /// V(r) = omega r^2 / (scale^2 + r^2)^2, a smooth cutoff of
    /// omega/r^2.  Hardy-admissible by construction, but nonnegativity
    /// of -Laplace + V is NOT guaranteed for omega < 0; such potentials
    /// must pass a Rayleigh scan before use in experiments.
    InverseSquareTail { dim: u32, omega: f64, scale: f64 },
}

impl Potential {
    pub fn zero() -> Self {
        Potential::Zero
    }

    /// Ground-state potential with prescribed decay exponent A = `decay`.
    /// Requires 0 < A < N/2 and |A - (N-2)/2| >= 1e-3: at A = (N-2)/2
    /// the tail coefficient hits the Hardy bound exactly.
    pub fn ground_state(dim: u32, decay: f64) -> Result<Self, PotentialError> {
        if dim == 0 {
            return Err(PotentialError::BadDimension(dim));
        }
        if !decay.is_finite() {
            return Err(PotentialError::NotFinite(decay));
        }
        let n = dim as f64;
        if !(decay > 0.0 && decay < 0.5 * n) {
            return Err(PotentialError::DecayOutOfRange {
                decay,
                max: 0.5 * n,
            });
        }
        let excluded = 0.5 * (n - 2.0);
        if (decay - excluded).abs() < DECAY_GUARD {
            return Err(PotentialError::DecayAtBranchCollision {
                decay,
                excluded,
                guard: DECAY_GUARD,
            });
        }
        Ok(Potential::GroundState { dim, decay })
    }

    /// Smooth cutoff of omega/r^2 at length `scale`.  The constructor
    /// enforces only the Hardy bound; negative omega is accepted here
    /// and gated by the Rayleigh scan downstream.
    pub fn inverse_square_tail(dim: u32, omega: f64, scale: f64) -> Result<Self, PotentialError> {
        if dim == 0 {
            return Err(PotentialError::BadDimension(dim));
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(PotentialError::BadScale(scale));
        }
        if !omega.is_finite() {
            return Err(PotentialError::NotFinite(omega));
        }
        let m = dim as f64 - 2.0;
        if m * m + 4.0 * omega <= 0.0 {
            return Err(PotentialError::BelowHardyBound {
                omega,
                bound: hardy_bound(dim),
                dim,
            });
        }
        Ok(Potential::InverseSquareTail { dim, omega, scale })
    }

    /// V(r), in units of 1/length^2.
    pub fn eval(&self, r: f64) -> f64 {
        match *self {
            Potential::Zero => 0.0,
            Potential::GroundState { dim, decay } => {
                let n = dim as f64;
                let r2 = r * r;
                let denom = (1.0 + r2) * (1.0 + r2);
                (decay * (decay + 2.0 - n) * r2 - decay * n) / denom
            }
            Potential::InverseSquareTail { omega, scale, .. } => {
                let r2 = r * r;
                let denom = scale * scale + r2;
                omega * r2 / (denom * denom)
            }
        }
    }

    /// Tail coefficient omega = lim r^2 V(r).
    pub fn omega(&self) -> f64 {
        match *self {
            Potential::Zero => 0.0,
            Potential::GroundState { dim, decay } => decay * (decay - dim as f64 + 2.0),
            Potential::InverseSquareTail { omega, .. } => omega,
        }
    }

    /// Dimension the potential was built for; `None` for the free case,
    /// which is dimension-agnostic.
    pub fn dim(&self) -> Option<u32> {
        match *self {
            Potential::Zero => None,
            Potential::GroundState { dim, .. } | Potential::InverseSquareTail { dim, .. } => {
                Some(dim)
            }
        }
    }

    /// Exact decay exponent when prescribed by construction.
    pub fn prescribed_decay(&self) -> Option<f64> {
        match *self {
            Potential::GroundState { decay, .. } => Some(decay),
            _ => None,
        }
    }

    /// Whether the prescribed exponent takes the larger (critical)
    /// branch, A > (N-2)/2; `None` when no exponent is prescribed.
    pub fn prescribed_critical(&self) -> Option<bool> {
        match *self {
            Potential::GroundState { dim, decay } => Some(decay > 0.5 * (dim as f64 - 2.0)),
            _ => None,
        }
    }

    /// Numerical check of the tail conditions on a logarithmic grid over
    /// [1, r_max]: returns (sup r^2 |r^2 V(r) - omega|, sup r^3 |V'(r)|),
    /// both of which stay bounded for an admissible inverse-square tail
    /// (the first because the correction order is 2).  Derivatives are
    /// central differences with a relative step of 1e-6.
    pub fn tail_condition_scan(&self, r_max: f64) -> (f64, f64) {
        let omega = self.omega();
        let mut dev = 0.0_f64;
        let mut slope = 0.0_f64;
        let samples = 200;
        for i in 0..=samples {
            let r = r_max.powf(i as f64 / samples as f64);
            let h = 1e-6 * r;
            let dv = (self.eval(r + h) - self.eval(r - h)) / (2.0 * h);
            dev = dev.max(r * r * (r * r * self.eval(r) - omega).abs());
            slope = slope.max(r * r * r * dv.abs());
        }
        (dev, slope)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn branch_exponents_solve_the_indicial_equation() {
        let (lo, hi) = branch_exponents(3, 0.0).unwrap();
        assert_eq!((lo, hi), (0.0, 1.0));
        let (lo, hi) = branch_exponents(4, 3.0).unwrap();
        assert_eq!((lo, hi), (-1.0, 3.0));
        for (dim, omega) in [(3, 0.7), (4, -0.9), (5, 2.3), (3, -0.2)] {
            let (lo, hi) = branch_exponents(dim, omega).unwrap();
            let m = dim as f64 - 2.0;
            for a in [lo, hi] {
                assert!((a * a - m * a - omega).abs() < 1e-12);
            }
            assert!(lo < hi);
            // the subcritical branch has omega * A <= 0 and A < N/2
            assert!(omega * lo <= 1e-15);
            assert!(lo < dim as f64 / 2.0);
        }
    }

    #[test]
    fn branch_exponents_reject_the_hardy_boundary() {
        assert!(branch_exponents(3, -0.25).is_err());
        assert!(branch_exponents(3, -0.3).is_err());
        assert!(branch_exponents(3, -0.2499).is_ok());
        assert!(branch_exponents(4, -1.0).is_err());
    }

    #[test]
    fn alpha_beta_are_conjugate_thresholds() {
        let (a, b) = alpha_beta(3, 1.0).unwrap();
        assert_eq!((a, b), (1.5, 3.0));
        let (a, b) = alpha_beta(4, 1.0).unwrap();
        assert!((a - 4.0 / 3.0).abs() < 1e-15 && b == 4.0);
        assert!(alpha_beta(3, 0.0).is_err());
        assert!(alpha_beta(3, 1.5).is_err());
    }

    #[test]
    fn ground_state_matches_the_closed_form_in_three_dimensions() {
        let v = Potential::ground_state(3, 1.0).unwrap();
        assert_eq!(v.eval(0.0), -3.0);
        for r in [0.1, 0.5, 1.0, 3.0, 10.0, 100.0] {
            let expected = -3.0 / ((1.0 + r * r) * (1.0 + r * r));
            assert!((v.eval(r) - expected).abs() <= 1e-15 * expected.abs());
        }
        assert_eq!(v.omega(), 0.0);
        assert_eq!(v.prescribed_critical(), Some(true));
    }

    #[test]
    fn ground_state_vanishes_in_the_small_decay_limit() {
        let v = Potential::ground_state(3, 1e-6).unwrap();
        for r in [0.0, 0.3, 1.0, 7.0] {
            assert!(v.eval(r).abs() <= 4e-6);
        }
    }

    #[test]
    fn ground_state_round_trips_through_the_branch_exponents() {
        for (dim, decay) in [
            (3, 0.25),
            (3, 0.75),
            (3, 1.0),
            (3, 1.25),
            (4, 0.5),
            (4, 1.5),
            (5, 2.2),
        ] {
            let v = Potential::ground_state(dim, decay).unwrap();
            let (lo, hi) = branch_exponents(dim, v.omega()).unwrap();
            let picked = if decay > 0.5 * (dim as f64 - 2.0) {
                hi
            } else {
                lo
            };
            assert!(
                (picked - decay).abs() < 1e-12,
                "dim {dim} decay {decay}: branches ({lo}, {hi})"
            );
            assert_eq!(
                v.prescribed_critical(),
                Some(decay > 0.5 * (dim as f64 - 2.0))
            );
        }
    }

    #[test]
    fn ground_state_guards_reject_boundary_exponents() {
        assert!(Potential::ground_state(3, 0.5).is_err());
        assert!(Potential::ground_state(3, 0.5009).is_err());
        assert!(Potential::ground_state(3, 0.502).is_ok());
        assert!(Potential::ground_state(3, 0.0).is_err());
        assert!(Potential::ground_state(3, 1.5).is_err());
        assert!(Potential::ground_state(4, 1.0).is_err());
    }

    #[test]
    fn inverse_square_tail_enforces_only_the_hardy_bound() {
        assert!(Potential::inverse_square_tail(3, -0.2, 1.0).is_ok());
        assert!(Potential::inverse_square_tail(3, -0.25, 1.0).is_err());
        assert!(Potential::inverse_square_tail(3, 5.0, 0.0).is_err());
        let v = Potential::inverse_square_tail(3, 2.0, 1.0).unwrap();
        assert_eq!(v.eval(0.0), 0.0);
        assert!((v.eval(10.0) - 2.0 * 100.0 / (101.0 * 101.0)).abs() < 1e-15);
        assert_eq!(v.omega(), 2.0);
    }

    #[test]
    fn tail_conditions_hold_on_a_log_grid() {
        for v in [
            Potential::ground_state(3, 1.0).unwrap(),
            Potential::ground_state(4, 1.5).unwrap(),
            Potential::inverse_square_tail(3, 2.0, 0.5).unwrap(),
        ] {
            let (dev, slope) = v.tail_condition_scan(1e6);
            assert!(dev.is_finite() && dev <= 20.0, "deviation {dev}");
            assert!(slope.is_finite() && slope <= 20.0, "slope {slope}");
        }
    }
}
