//! Rayleigh-quotient probes for the quadratic form of -Laplace + V.
//!
//! The quotient of a compactly supported radial probe phi is
//!
//!   Q(phi) = int (|grad phi|^2 + V phi^2) dx / int phi^2 dx,
//!
//! computed by exact per-cell integration of the gradient term and
//! 16-point Gauss-Legendre quadrature against the r^(N-1) weight for
//! the potential and mass terms.  A scan over a standard battery of
//! bumps, tents and shells detects potentials whose operator has
//! negative spectrum: admissible potentials keep every quotient above
//! -1e-8.

use std::sync::Arc;

use lorentz::{gauss_legendre_16, unit_ball_volume, RadialFunction, RadialGrid};

use crate::potential::{Potential, PotentialError};

/// Quotients this far below zero are treated as genuine negative
/// spectrum rather than quadrature noise.
pub const ADMISSIBILITY_TOL: f64 = 1e-8;

/// Outcome of a probe battery scan.
#[derive(Debug, Clone)]
pub struct RayleighReport {
    /// Human-readable probe descriptions, aligned with `quotients`.
    pub probes: Vec<String>,
    /// Rayleigh quotient of each probe, in units of 1/length^2.
    pub quotients: Vec<f64>,
    pub min_quotient: f64,
    /// True when every quotient clears -1e-8.
    pub admissible: bool,
}

/// Rayleigh quotient of `probe` for the potential given as a plain
/// radial function of r.  The probe must vanish at its outer boundary.
pub fn rayleigh_quotient_fn(
    dim: u32,
    v: impl Fn(f64) -> f64,
    probe: &RadialFunction,
) -> Result<f64, PotentialError> {
    if probe.dim() != dim {
        return Err(PotentialError::DimensionMismatch {
            probe: probe.dim(),
            potential: dim,
        });
    }
    let last = *probe.values().last().expect("nonempty profile");
    if last != 0.0 {
        return Err(PotentialError::ProbeBoundary(last));
    }
    if probe.max_abs() == 0.0 {
        return Err(PotentialError::ZeroProbe);
    }
    let n = dim as f64;
    let c_dim = unit_ball_volume(dim);
    let (gl_nodes, gl_weights) = gauss_legendre_16();
    let nodes = probe.grid().nodes();
    let values = probe.values();
    let mut kinetic = 0.0;
    let mut potential_term = 0.0;
    let mut mass = 0.0;
    for i in 0..nodes.len() - 1 {
        let (rl, rr) = (nodes[i], nodes[i + 1]);
        let (fl, fr) = (values[i], values[i + 1]);
        let width = rr - rl;
        if width <= 0.0 {
            continue;
        }
        let slope = (fr - fl) / width;
        kinetic += c_dim * slope * slope * (rr.powi(dim as i32) - rl.powi(dim as i32));
        let mid = 0.5 * (rl + rr);
        let half = 0.5 * width;
        for (x, w) in gl_nodes.iter().zip(gl_weights) {
            let r = mid + half * x;
            let phi = fl + slope * (r - rl);
            let weight = w * half * r.powf(n - 1.0);
            potential_term += weight * v(r) * phi * phi;
            mass += weight * phi * phi;
        }
    }
    potential_term *= n * c_dim;
    mass *= n * c_dim;
    Ok((kinetic + potential_term) / mass)
}

/// Rayleigh quotient of `probe` for a structured potential.
pub fn rayleigh_quotient(
    potential: &Potential,
    probe: &RadialFunction,
) -> Result<f64, PotentialError> {
    if let Some(d) = potential.dim() {
        if d != probe.dim() {
            return Err(PotentialError::DimensionMismatch {
                probe: probe.dim(),
                potential: d,
            });
        }
    }
    rayleigh_quotient_fn(probe.dim(), |r| potential.eval(r), probe)
}

fn bump_probe(dim: u32, radius: f64) -> RadialFunction {
    let cells = 400;
    let nodes: Vec<f64> = (0..=cells).map(|i| radius * i as f64 / cells as f64).collect();
    let grid = Arc::new(RadialGrid::from_nodes(dim, nodes).expect("valid probe grid"));
    RadialFunction::from_fn(&grid, |r| {
        let x = r / radius;
        if x < 1.0 {
            (1.0 - 1.0 / (1.0 - x * x)).exp()
        } else {
            0.0
        }
    })
    .expect("finite probe values")
}

fn tent_probe(dim: u32, radius: f64) -> RadialFunction {
    let cells = 200;
    let nodes: Vec<f64> = (0..=cells).map(|i| radius * i as f64 / cells as f64).collect();
    let grid = Arc::new(RadialGrid::from_nodes(dim, nodes).expect("valid probe grid"));
    RadialFunction::from_fn(&grid, |r| 1.0 - r / radius).expect("finite probe values")
}

fn shell_probe(dim: u32, radius: f64) -> RadialFunction {
    let cells = 200;
    let nodes: Vec<f64> = (0..=cells).map(|i| radius * i as f64 / cells as f64).collect();
    let grid = Arc::new(RadialGrid::from_nodes(dim, nodes).expect("valid probe grid"));
    RadialFunction::from_fn(&grid, |r| {
        let x = r / radius;
        if x < 0.5 {
            2.0 * x
        } else {
            2.0 * (1.0 - x)
        }
    })
    .expect("finite probe values")
}

/// Scan a standard probe battery (bumps, tents and shells at a ladder of
/// widths up to r_max) against the potential given as a function of r.
pub fn rayleigh_scan_fn(
    dim: u32,
    v: impl Fn(f64) -> f64,
    r_max: f64,
) -> Result<RayleighReport, PotentialError> {
    let mut probes = Vec::new();
    let mut quotients = Vec::new();
    for radius in [0.5, 1.0, 2.0, 5.0, 10.0, 25.0, 50.0, 100.0] {
        if radius > r_max {
            break;
        }
        for (label, probe) in [
            ("bump", bump_probe(dim, radius)),
            ("tent", tent_probe(dim, radius)),
            ("shell", shell_probe(dim, radius)),
        ] {
            quotients.push(rayleigh_quotient_fn(dim, &v, &probe)?);
            probes.push(format!("{label} R={radius}"));
        }
    }
    let min_quotient = quotients.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(RayleighReport {
        probes,
        quotients,
        admissible: min_quotient >= -ADMISSIBILITY_TOL,
        min_quotient,
    })
}

/// Scan the standard probe battery against a structured potential.
pub fn rayleigh_scan(
    potential: &Potential,
    dim: u32,
    r_max: f64,
) -> Result<RayleighReport, PotentialError> {
    if let Some(d) = potential.dim() {
        if d != dim {
            return Err(PotentialError::DimensionMismatch {
                probe: dim,
                potential: d,
            });
        }
    }
    rayleigh_scan_fn(dim, |r| potential.eval(r), r_max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tent_quotient_of_the_free_operator_is_exact() {
        // for V = 0 and phi = 1 - r/R in three dimensions the quotient
        // is (R/3) / (R^3/30) = 10/R^2
        let probe = tent_probe(3, 2.0);
        let q = rayleigh_quotient(&Potential::Zero, &probe).unwrap();
        assert!((q - 2.5).abs() <= 1e-12 * 2.5, "got {q}");
    }

    #[test]
    fn free_operator_scan_is_nonnegative() {
        let report = rayleigh_scan(&Potential::Zero, 3, 100.0).unwrap();
        assert!(report.admissible);
        assert!(report.min_quotient >= 0.0);
        assert_eq!(report.probes.len(), report.quotients.len());
    }

    #[test]
    fn ground_state_potential_passes_the_scan() {
        let v = Potential::ground_state(3, 1.0).unwrap();
        let report = rayleigh_scan(&v, 3, 100.0).unwrap();
        assert!(
            report.admissible,
            "min quotient {}",
            report.min_quotient
        );
        assert!(report.min_quotient >= -ADMISSIBILITY_TOL);
    }

    #[test]
    fn hardy_admissible_negative_tail_passes_the_scan() {
        // V >= omega r^-2 pointwise for omega < 0, so the form is
        // nonnegative whenever omega clears the Hardy bound
        let v = Potential::inverse_square_tail(3, -0.2, 1.0).unwrap();
        let report = rayleigh_scan(&v, 3, 100.0).unwrap();
        assert!(
            report.admissible,
            "min quotient {}",
            report.min_quotient
        );
    }

    #[test]
    fn deep_well_is_detected_as_inadmissible() {
        let report = rayleigh_scan_fn(3, |r| -10.0 / (1.0 + r * r), 100.0).unwrap();
        assert!(!report.admissible);
        assert!(report.min_quotient < 0.0);
    }

    #[test]
    fn probes_must_vanish_at_the_boundary() {
        let grid = Arc::new(RadialGrid::from_nodes(3, vec![0.0, 1.0, 2.0]).unwrap());
        let probe = RadialFunction::from_values(grid, vec![1.0, 1.0, 0.5]).unwrap();
        assert!(matches!(
            rayleigh_quotient(&Potential::Zero, &probe),
            Err(PotentialError::ProbeBoundary(_))
        ));
    }
}
