//! Exact decay-rate table for Lorentz-to-Lorentz mapping norms of the
//! heat semigroup exp(-tH), H = -Laplace + V on R^N, where the positive
//! harmonic profile of H decays like r^(-A) at infinity.
//!
//! For an admissible exponent quadruple (p, q, sigma, theta) the mapping
//! norm from L^{p,sigma} to L^{q,theta} behaves like t^gamma (log t)^delta
//! for large t, with gamma and delta rational in N, A, and the exponents.
//! For A <= 0 the rate is the free one, gamma = -(N/2)(1/p - 1/q) and
//! delta = 0.  For 0 < A < N/2 the table is organized around the two
//! thresholds alpha = N/(N - A) and beta = N/A: secondary exponents enter
//! only on the critical lines p = alpha (through 1/sigma') and q = beta
//! (through 1/theta), and the power of t saturates once p or q crosses
//! its threshold.  All arithmetic here is exact rational arithmetic, so
//! equalities such as p = alpha or q = beta are decided without rounding.

use std::cmp::Ordering;
use std::fmt;

use lorentz::{Exponent, ExponentQuadruple, Rational};
use num_traits::{One, ToPrimitive, Zero};

use crate::RateLabError;

/// A large-time envelope t^gamma (log t)^delta with exact exponents.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct DecayRate {
    gamma: Rational,
    delta: Rational,
}

impl DecayRate {
    pub fn new(gamma: Rational, delta: Rational) -> Self {
        Self { gamma, delta }
    }

    /// Power of t.
    pub fn gamma(&self) -> Rational {
        self.gamma
    }

    /// Power of log t; zero when the cell carries no log factor.
    pub fn delta(&self) -> Rational {
        self.delta
    }

    pub fn gamma_f64(&self) -> f64 {
        self.gamma.to_f64().unwrap_or(f64::NAN)
    }

    pub fn delta_f64(&self) -> f64 {
        self.delta.to_f64().unwrap_or(f64::NAN)
    }
}

fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for DecayRate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.gamma.is_zero() {
            parts.push(format!("t^({})", fmt_rational(&self.gamma)));
        }
        if !self.delta.is_zero() {
            parts.push(format!("(log t)^({})", fmt_rational(&self.delta)));
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}

impl fmt::Debug for DecayRate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses an exact rational from integer ("2"), fraction ("-3/4"), or
/// decimal ("1.25") notation.  Unlike exponent parsing this accepts any
/// sign, so it suits decay exponents A.
pub fn parse_rational(raw: &str) -> Result<Rational, RateLabError> {
    let s = raw.trim();
    let bad = || RateLabError::BadRational(raw.to_string());
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1i64, rest),
        None => (1i64, s.strip_prefix('+').unwrap_or(s)),
    };
    if body.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = body.split_once('/') {
        let n: i64 = n.trim().parse().map_err(|_| bad())?;
        let d: i64 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        return Ok(Rational::new(sign * n, d));
    }
    if let Some((int, frac)) = body.split_once('.') {
        if frac.is_empty() || frac.len() > 12 || frac.chars().any(|c| !c.is_ascii_digit()) {
            return Err(bad());
        }
        let int: i64 = if int.is_empty() {
            0
        } else {
            int.parse().map_err(|_| bad())?
        };
        let den = 10i64.pow(frac.len() as u32);
        let num: i64 = frac.parse().map_err(|_| bad())?;
        return Ok(Rational::new(sign * (int * den + num), den));
    }
    let n: i64 = body.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(sign * n))
}

fn cmp_exponent(e: Exponent, r: Rational) -> Ordering {
    match e {
        Exponent::Finite(v) => v.cmp(&r),
        Exponent::Infinity => Ordering::Greater,
    }
}

/// The predicted envelope exponents for the mapping norm from
/// L^{p,sigma} to L^{q,theta} in dimension `dim` with harmonic-profile
/// decay exponent `decay` (A).  Requires A < N/2; the quadruple type
/// already guarantees admissibility.
pub fn theoretical_rate(
    dim: u32,
    decay: Rational,
    quad: &ExponentQuadruple,
) -> Result<DecayRate, RateLabError> {
    if dim == 0 {
        return Err(RateLabError::ZeroDimension);
    }
    let n = Rational::from_integer(dim as i64);
    let half_n = Rational::new(dim as i64, 2);
    if decay >= half_n {
        return Err(RateLabError::SupercriticalDecay { decay, dim });
    }

    let p = quad.source().principal();
    let sigma = quad.source().secondary();
    let q = quad.target().principal();
    let theta = quad.target().secondary();
    let inv_p = p.reciprocal();
    let inv_q = q.reciprocal();
    let zero = Rational::zero();
    let one = Rational::one();

    if decay <= zero {
        return Ok(DecayRate::new(-half_n * (inv_p - inv_q), zero));
    }

    let alpha = n / (n - decay);
    let beta = n / decay;
    let half_decay = decay / Rational::from_integer(2);
    // Log exponents: 1/theta vanishes at theta = infinity and 1/sigma'
    // vanishes at sigma = 1, so the endpoint conventions are automatic.
    let inv_theta = theta.reciprocal();
    let inv_sigma_conj = one - sigma.reciprocal();
    // Powers of t used by the table.
    let full = -half_n + decay;
    let smoothing = -half_n * (one - inv_q) + half_decay;
    let saturated = -half_n * inv_p + half_decay;

    let (gamma, delta) = match cmp_exponent(p, alpha) {
        Ordering::Less => match cmp_exponent(q, beta) {
            Ordering::Less => (smoothing, zero),
            Ordering::Equal => (full, inv_theta),
            Ordering::Greater => (full, zero),
        },
        Ordering::Equal => match cmp_exponent(q, beta) {
            Ordering::Less => (smoothing, inv_sigma_conj),
            Ordering::Equal => (full, inv_theta + inv_sigma_conj),
            Ordering::Greater => (full, inv_sigma_conj),
        },
        Ordering::Greater => match cmp_exponent(p, beta) {
            Ordering::Less => match cmp_exponent(q, beta) {
                Ordering::Less => (-half_n * (inv_p - inv_q), zero),
                Ordering::Equal => (saturated, inv_theta),
                Ordering::Greater => (saturated, zero),
            },
            Ordering::Equal => match cmp_exponent(q, beta) {
                // q >= p = beta by admissibility.
                Ordering::Less => unreachable!("admissible quadruples have q >= p"),
                Ordering::Equal => (zero, inv_theta),
                Ordering::Greater => (saturated, zero),
            },
            Ordering::Greater => (saturated, zero),
        },
    };
    Ok(DecayRate::new(gamma, delta))
}

/// Checks the exact self-duality of the rate table: the envelope for
/// (p, q, sigma, theta) equals the envelope for the conjugate quadruple
/// (q', p', theta', sigma').
pub fn duality_identity(
    dim: u32,
    decay: Rational,
    quad: &ExponentQuadruple,
) -> Result<bool, RateLabError> {
    let direct = theoretical_rate(dim, decay, quad)?;
    let dual = theoretical_rate(dim, decay, &quad.dual())?;
    Ok(direct == dual)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quad(p: &str, q: &str, sigma: &str, theta: &str) -> ExponentQuadruple {
        ExponentQuadruple::parse(p, q, sigma, theta).unwrap()
    }

    fn rate(dim: u32, decay: &str, q: &ExponentQuadruple) -> DecayRate {
        theoretical_rate(dim, parse_rational(decay).unwrap(), q).unwrap()
    }

    fn rational(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn free_rates_follow_the_smoothing_exponent() {
        let r = rate(3, "0", &quad("1", "2", "1", "2"));
        assert_eq!(r.gamma(), rational("-3/4"));
        assert_eq!(r.delta(), rational("0"));
        let r = rate(3, "-1", &quad("1", "inf", "1", "inf"));
        assert_eq!(r.gamma(), rational("-3/2"));
        assert_eq!(r.delta(), rational("0"));
    }

    #[test]
    fn saturated_cell_below_alpha() {
        // N = 3, A = 1: alpha = 3/2, beta = 3; p = 1 < alpha, q > beta.
        let r = rate(3, "1", &quad("1", "inf", "1", "inf"));
        assert_eq!(r.gamma(), rational("-1/2"));
        assert_eq!(r.delta(), rational("0"));
    }

    #[test]
    fn diagonal_cell_at_beta_is_a_pure_log() {
        let r = rate(3, "1", &quad("3", "3", "1", "2"));
        assert_eq!(r.gamma(), rational("0"));
        assert_eq!(r.delta(), rational("1/2"));
    }

    #[test]
    fn double_log_cell_at_alpha_to_beta() {
        // p = alpha, q = beta, sigma = 3, theta = 2:
        // delta = 1/theta + 1/sigma' = 1/2 + 2/3.
        let r = rate(3, "1", &quad("3/2", "3", "3", "2"));
        assert_eq!(r.gamma(), rational("-1/2"));
        assert_eq!(r.delta(), rational("7/6"));
    }

    #[test]
    fn mass_norm_grows_at_half_the_decay_exponent() {
        let r = rate(3, "1", &quad("1", "1", "1", "1"));
        assert_eq!(r.gamma(), rational("1/2"));
        assert_eq!(r.delta(), rational("0"));
    }

    #[test]
    fn the_power_is_continuous_across_the_beta_column() {
        // Approaching q = beta from below reproduces the q = beta power.
        let n = Rational::from_integer(3);
        let a = rational("1");
        let beta = n / a;
        let smoothing_at_beta =
            -Rational::new(3, 2) * (Rational::one() - beta.recip()) + a / Rational::from_integer(2);
        let full = -Rational::new(3, 2) + a;
        assert_eq!(smoothing_at_beta, full);
    }

    #[test]
    fn zero_power_cell_between_one_and_alpha() {
        // p = 5/4 < alpha, q = 3/2 < beta: the smoothing power vanishes
        // exactly at q = alpha.
        let r = rate(3, "1", &quad("5/4", "3/2", "2", "2"));
        assert_eq!(r.gamma(), rational("0"));
        assert_eq!(r.delta(), rational("0"));
    }

    #[test]
    fn l2_diagonal_has_no_decay_for_positive_a() {
        let r = rate(3, "1", &quad("2", "2", "2", "2"));
        assert_eq!(r.gamma(), rational("0"));
        assert_eq!(r.delta(), rational("0"));
    }

    #[test]
    fn sup_norm_diagonal_grows_at_half_the_decay_exponent() {
        let r = rate(3, "1", &quad("inf", "inf", "inf", "inf"));
        assert_eq!(r.gamma(), rational("1/2"));
        assert_eq!(r.delta(), rational("0"));
    }

    #[test]
    fn four_dimensional_diagonal_at_beta() {
        // N = 4, A = 1: beta = 4.
        let r = rate(4, "1", &quad("4", "4", "2", "3"));
        assert_eq!(r.gamma(), rational("0"));
        assert_eq!(r.delta(), rational("1/3"));
    }

    #[test]
    fn supercritical_decay_is_rejected() {
        let err = theoretical_rate(3, rational("3/2"), &quad("1", "2", "1", "2"));
        assert!(matches!(
            err,
            Err(RateLabError::SupercriticalDecay { .. })
        ));
        assert!(theoretical_rate(3, rational("2"), &quad("1", "2", "1", "2")).is_err());
        assert!(theoretical_rate(3, rational("149/100"), &quad("1", "2", "1", "2")).is_ok());
    }

    #[test]
    fn self_dual_cell_agrees_with_itself() {
        let q = quad("1", "inf", "1", "inf");
        assert!(duality_identity(3, rational("1"), &q).unwrap());
    }

    #[test]
    fn dual_of_the_double_log_cell_matches_exactly() {
        let q = quad("3/2", "3", "3", "2");
        let d = q.dual();
        let r1 = rate(3, "1", &q);
        let r2 = rate(3, "1", &d);
        assert_eq!(r1, r2);
        assert_eq!(r2.delta(), rational("7/6"));
    }

    fn exponent_pool() -> Vec<Exponent> {
        ["1", "5/4", "4/3", "3/2", "2", "5/2", "3", "4", "6", "inf"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect()
    }

    fn secondary_pool() -> Vec<Exponent> {
        ["1", "3/2", "2", "3", "inf"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect()
    }

    fn admissible_sweep() -> Vec<ExponentQuadruple> {
        let mut quads = Vec::new();
        for &p in &exponent_pool() {
            for &q in &exponent_pool() {
                for &sigma in &secondary_pool() {
                    for &theta in &secondary_pool() {
                        if let Ok(quadruple) = ExponentQuadruple::from_parts(p, q, sigma, theta) {
                            quads.push(quadruple);
                        }
                    }
                }
            }
        }
        quads
    }

    #[test]
    fn duality_holds_on_an_exhaustive_sweep() {
        let quads = admissible_sweep();
        assert!(quads.len() >= 200, "sweep too small: {}", quads.len());
        for (dim, decay) in [(3, "1"), (4, "1"), (3, "-1"), (3, "0")] {
            let a = rational(decay);
            for q in &quads {
                assert!(
                    duality_identity(dim, a, q).unwrap(),
                    "duality fails at N = {dim}, A = {decay}, quadruple {q:?}"
                );
            }
        }
    }

    #[test]
    fn power_is_monotone_nonincreasing_in_q() {
        let pool = exponent_pool();
        for (dim, decay) in [(3, "1"), (4, "1"), (3, "-1"), (3, "0")] {
            let a = rational(decay);
            for &p in &pool {
                let sigma = if p.is_one() {
                    Exponent::ONE
                } else if !p.is_finite() {
                    Exponent::INF
                } else {
                    Exponent::TWO
                };
                let mut last: Option<Rational> = None;
                for &q in &pool {
                    if q < p {
                        continue;
                    }
                    let theta = if q.is_one() {
                        Exponent::ONE
                    } else if !q.is_finite() {
                        Exponent::INF
                    } else {
                        Exponent::TWO
                    };
                    let Ok(quadruple) = ExponentQuadruple::from_parts(p, q, sigma, theta) else {
                        continue;
                    };
                    let gamma = theoretical_rate(dim, a, &quadruple).unwrap().gamma();
                    if let Some(prev) = last {
                        assert!(
                            gamma <= prev,
                            "gamma increases in q at N = {dim}, A = {decay}, p = {p}, q = {q}"
                        );
                    }
                    last = Some(gamma);
                }
            }
        }
    }

    #[test]
    fn secondary_exponents_matter_only_on_the_critical_lines() {
        let a = rational("1");
        let secondaries = secondary_pool();
        // Off-critical: p = 2 (strictly between alpha and beta), q = 2.
        let mut seen = Vec::new();
        for &sigma in &secondaries {
            for &theta in &secondaries {
                if let Ok(q) = ExponentQuadruple::from_parts(
                    Exponent::TWO,
                    Exponent::TWO,
                    sigma,
                    theta,
                ) {
                    seen.push(theoretical_rate(3, a, &q).unwrap());
                }
            }
        }
        assert!(seen.windows(2).all(|w| w[0] == w[1]));

        // p = alpha: delta moves with sigma.
        let at_alpha: Vec<DecayRate> = ["1", "3"]
            .iter()
            .map(|s| rate(3, "1", &quad("3/2", "2", s, "2")))
            .collect();
        assert_eq!(at_alpha[0].gamma(), at_alpha[1].gamma());
        assert_eq!(
            at_alpha[1].delta() - at_alpha[0].delta(),
            rational("2/3")
        );

        // q = beta: delta moves with theta.
        let at_beta: Vec<DecayRate> = ["1", "2", "inf"]
            .iter()
            .map(|s| rate(3, "1", &quad("2", "3", "2", s)))
            .collect();
        assert_eq!(at_beta[0].delta(), rational("1"));
        assert_eq!(at_beta[1].delta(), rational("1/2"));
        assert_eq!(at_beta[2].delta(), rational("0"));
        assert!(at_beta.windows(2).all(|w| w[0].gamma() == w[1].gamma()));
    }

    #[test]
    fn rational_parsing_accepts_signs_fractions_and_decimals() {
        assert_eq!(parse_rational("1").unwrap(), Rational::from_integer(1));
        assert_eq!(parse_rational("-1").unwrap(), Rational::from_integer(-1));
        assert_eq!(parse_rational("0.25").unwrap(), Rational::new(1, 4));
        assert_eq!(parse_rational("-3/4").unwrap(), Rational::new(-3, 4));
        assert_eq!(parse_rational("+1.5").unwrap(), Rational::new(3, 2));
        assert!(parse_rational("a").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn display_shows_compact_envelopes() {
        assert_eq!(
            format!("{}", rate(3, "1", &quad("3/2", "3", "3", "2"))),
            "t^(-1/2) (log t)^(7/6)"
        );
        assert_eq!(format!("{}", rate(3, "1", &quad("3", "3", "1", "2"))), "(log t)^(1/2)");
        assert_eq!(format!("{}", rate(3, "1", &quad("2", "2", "2", "2"))), "1");
    }
}
