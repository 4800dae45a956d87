//! Exact exponent algebra for two-exponent function spaces.
//!
//! Exponents live in [1, infinity] and are stored as exact rationals so
//! that Hoelder conjugation (1 <-> infinity, p -> p/(p-1)) and the
//! admissibility rules below are decided without floating-point rounding.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};

use crate::LorentzError;

/// Exact rational scalar used for exponent arithmetic.
pub type Rational = Ratio<i64>;

/// An integrability exponent in [1, infinity].
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub enum Exponent {
    /// A finite exponent p >= 1, stored in lowest terms.
    Finite(Rational),
    /// The essential-supremum endpoint.
    Infinity,
}

impl Exponent {
    /// Finite exponent from a rational `num/den`.
    pub fn finite(num: i64, den: i64) -> Result<Self, LorentzError> {
        if den == 0 {
            return Err(LorentzError::InvalidExponent("zero denominator".into()));
        }
        Self::from_rational(Ratio::new(num, den))
    }

    /// Finite exponent from an integer.
    pub fn from_int(p: i64) -> Result<Self, LorentzError> {
        Self::from_rational(Ratio::from_integer(p))
    }

    pub fn from_rational(p: Rational) -> Result<Self, LorentzError> {
        if p < Rational::one() {
            return Err(LorentzError::InvalidExponent(format!(
                "exponent {p} is below 1"
            )));
        }
        Ok(Exponent::Finite(p))
    }

    pub const INF: Exponent = Exponent::Infinity;
    pub const ONE: Exponent = Exponent::Finite(Ratio::new_raw(1, 1));
    pub const TWO: Exponent = Exponent::Finite(Ratio::new_raw(2, 1));

    pub fn is_finite(&self) -> bool {
        matches!(self, Exponent::Finite(_))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Exponent::Finite(p) if p.is_one())
    }

    /// The exponent as a float; `f64::INFINITY` for the endpoint.
    pub fn as_f64(&self) -> f64 {
        match self {
            Exponent::Finite(p) => p.to_f64().unwrap_or(f64::INFINITY),
            Exponent::Infinity => f64::INFINITY,
        }
    }

    /// Exact reciprocal 1/p, with 1/infinity = 0.
    pub fn reciprocal(&self) -> Rational {
        match self {
            Exponent::Finite(p) => p.recip(),
            Exponent::Infinity => Rational::zero(),
        }
    }

    /// Hoelder conjugate: 1' = infinity, infinity' = 1 and p' = p/(p-1)
    /// otherwise, so that 1/p + 1/p' = 1 exactly.
    pub fn conjugate(&self) -> Exponent {
        match self {
            Exponent::Infinity => Exponent::ONE,
            Exponent::Finite(p) if p.is_one() => Exponent::Infinity,
            Exponent::Finite(p) => Exponent::Finite(*p / (*p - Rational::one())),
        }
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Exponent::Infinity, Exponent::Infinity) => Ordering::Equal,
            (Exponent::Infinity, _) => Ordering::Greater,
            (_, Exponent::Infinity) => Ordering::Less,
            (Exponent::Finite(a), Exponent::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Infinity => write!(f, "inf"),
            Exponent::Finite(p) if p.is_integer() => write!(f, "{}", p.numer()),
            Exponent::Finite(p) => write!(f, "{}/{}", p.numer(), p.denom()),
        }
    }
}

impl fmt::Debug for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Exponent {
    type Err = LorentzError;

    /// Parses `"inf"`, integers (`"3"`), fractions (`"3/2"`) and decimal
    /// literals (`"1.25"`, kept exact via a power-of-ten denominator).
    fn from_str(raw: &str) -> Result<Self, Self::Err> {
        let s = raw.trim();
        if s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("infinity") || s == "∞" {
            return Ok(Exponent::Infinity);
        }
        if let Some((n, d)) = s.split_once('/') {
            let n: i64 = n
                .trim()
                .parse()
                .map_err(|_| LorentzError::InvalidExponent(raw.into()))?;
            let d: i64 = d
                .trim()
                .parse()
                .map_err(|_| LorentzError::InvalidExponent(raw.into()))?;
            if d == 0 {
                return Err(LorentzError::InvalidExponent(raw.into()));
            }
            return Self::from_rational(Ratio::new(n, d));
        }
        if let Some((int, frac)) = s.split_once('.') {
            if frac.len() > 12 || frac.chars().any(|c| !c.is_ascii_digit()) {
                return Err(LorentzError::InvalidExponent(raw.into()));
            }
            let int: i64 = if int.is_empty() {
                0
            } else {
                int.parse()
                    .map_err(|_| LorentzError::InvalidExponent(raw.into()))?
            };
            let den = 10i64.pow(frac.len() as u32);
            let num: i64 = if frac.is_empty() {
                0
            } else {
                frac.parse()
                    .map_err(|_| LorentzError::InvalidExponent(raw.into()))?
            };
            return Self::from_rational(Ratio::new(int * den + num, den));
        }
        let n: i64 = s
            .parse()
            .map_err(|_| LorentzError::InvalidExponent(raw.into()))?;
        Self::from_int(n)
    }
}

/// Hoelder conjugate as a free function; 1/p + 1/p' = 1 exactly.
pub fn holder_conjugate(p: Exponent) -> Exponent {
    p.conjugate()
}

/// A (principal, secondary) exponent pair naming one two-exponent space.
///
/// The endpoint rules are part of the type: the secondary exponent is 1
/// when p = 1 and infinity when p = infinity.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct LorentzExponents {
    p: Exponent,
    s: Exponent,
}

impl LorentzExponents {
    pub fn new(p: Exponent, s: Exponent) -> Result<Self, LorentzError> {
        if p.is_one() && !s.is_one() {
            return Err(LorentzError::InvalidPair(format!(
                "secondary exponent must be 1 when p = 1, got {s}"
            )));
        }
        if !p.is_finite() && s.is_finite() {
            return Err(LorentzError::InvalidPair(format!(
                "secondary exponent must be inf when p = inf, got {s}"
            )));
        }
        Ok(Self { p, s })
    }

    /// Parses a pair such as `("3/2", "2")`.
    pub fn parse(p: &str, s: &str) -> Result<Self, LorentzError> {
        Self::new(p.parse()?, s.parse()?)
    }

    /// The diagonal pair (p, p), which names the ordinary Lebesgue space.
    pub fn diagonal(p: Exponent) -> Self {
        Self { p, s: p }
    }

    pub fn principal(&self) -> Exponent {
        self.p
    }

    pub fn secondary(&self) -> Exponent {
        self.s
    }

    /// The associate pair (p', s') describing the dual space.
    pub fn conjugate(&self) -> Self {
        Self {
            p: self.p.conjugate(),
            s: self.s.conjugate(),
        }
    }
}

impl fmt::Display for LorentzExponents {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.p, self.s)
    }
}

impl fmt::Debug for LorentzExponents {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Whether (p, q, sigma, theta) indexes an admissible source/target pair
/// of spaces for the mapping-norm experiments: 1 <= p <= q <= infinity,
/// both pairs satisfy the endpoint rules, and sigma <= theta when p = q.
pub fn is_admissible(p: Exponent, q: Exponent, sigma: Exponent, theta: Exponent) -> bool {
    if LorentzExponents::new(p, sigma).is_err() || LorentzExponents::new(q, theta).is_err() {
        return false;
    }
    if p > q {
        return false;
    }
    if p == q && sigma > theta {
        return false;
    }
    true
}

/// An admissible source/target pair of exponent pairs.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct ExponentQuadruple {
    source: LorentzExponents,
    target: LorentzExponents,
}

impl ExponentQuadruple {
    pub fn new(source: LorentzExponents, target: LorentzExponents) -> Result<Self, LorentzError> {
        if !is_admissible(
            source.principal(),
            target.principal(),
            source.secondary(),
            target.secondary(),
        ) {
            return Err(LorentzError::Inadmissible(format!(
                "{source} -> {target}"
            )));
        }
        Ok(Self { source, target })
    }

    pub fn from_parts(
        p: Exponent,
        q: Exponent,
        sigma: Exponent,
        theta: Exponent,
    ) -> Result<Self, LorentzError> {
        Self::new(LorentzExponents::new(p, sigma)?, LorentzExponents::new(q, theta)?)
    }

    /// Parses `("1", "3", "1", "2")` style string quadruples.
    pub fn parse(p: &str, q: &str, sigma: &str, theta: &str) -> Result<Self, LorentzError> {
        Self::from_parts(p.parse()?, q.parse()?, sigma.parse()?, theta.parse()?)
    }

    pub fn source(&self) -> LorentzExponents {
        self.source
    }

    pub fn target(&self) -> LorentzExponents {
        self.target
    }

    /// The dual quadruple (q', p', theta', sigma').  Mapping norms between
    /// the associate spaces taken in reverse order are comparable to the
    /// original ones, and admissibility is preserved exactly.
    pub fn dual(&self) -> ExponentQuadruple {
        let source = LorentzExponents {
            p: self.target.p.conjugate(),
            s: self.target.s.conjugate(),
        };
        let target = LorentzExponents {
            p: self.source.p.conjugate(),
            s: self.source.s.conjugate(),
        };
        debug_assert!(is_admissible(source.p, target.p, source.s, target.s));
        ExponentQuadruple { source, target }
    }
}

impl fmt::Display for ExponentQuadruple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{},{},{})",
            self.source.p, self.target.p, self.source.s, self.target.s
        )
    }
}

impl fmt::Debug for ExponentQuadruple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex(s: &str) -> Exponent {
        s.parse().unwrap()
    }

    #[test]
    fn conjugate_endpoints() {
        assert_eq!(ex("1").conjugate(), Exponent::Infinity);
        assert_eq!(Exponent::Infinity.conjugate(), ex("1"));
        assert_eq!(ex("2").conjugate(), ex("2"));
        assert_eq!(ex("3/2").conjugate(), ex("3"));
        assert_eq!(ex("4").conjugate(), ex("4/3"));
    }

    #[test]
    fn conjugate_is_an_involution() {
        for s in ["1", "9/8", "5/4", "4/3", "3/2", "2", "3", "7/2", "10", "inf"] {
            let p = ex(s);
            assert_eq!(p.conjugate().conjugate(), p, "p = {p}");
        }
    }

    #[test]
    fn conjugate_sums_to_one() {
        for s in ["1", "5/4", "3/2", "2", "3", "17/5", "inf"] {
            let p = ex(s);
            let total = p.reciprocal() + p.conjugate().reciprocal();
            assert!(total.is_one(), "1/p + 1/p' != 1 for p = {p}");
        }
    }

    #[test]
    fn rejects_exponents_below_one() {
        assert!(Exponent::finite(1, 2).is_err());
        assert!(Exponent::finite(9, 10).is_err());
        assert!("0.5".parse::<Exponent>().is_err());
        assert!(Exponent::finite(3, 0).is_err());
    }

    #[test]
    fn parses_decimal_literals_exactly() {
        assert_eq!(ex("1.25"), Exponent::finite(5, 4).unwrap());
        assert_eq!(ex("1.5"), Exponent::finite(3, 2).unwrap());
        assert_eq!(ex("2"), Exponent::TWO);
    }

    #[test]
    fn admissibility_examples() {
        assert!(is_admissible(ex("1"), ex("2"), ex("1"), ex("3")));
        // sigma must be 1 at p = 1
        assert!(!is_admissible(ex("1"), ex("2"), ex("2"), ex("3")));
        // secondary exponents must be ordered on the diagonal
        assert!(!is_admissible(ex("2"), ex("2"), ex("3"), ex("2")));
        assert!(is_admissible(ex("2"), ex("2"), ex("2"), ex("3")));
        // p <= q
        assert!(!is_admissible(ex("3"), ex("2"), ex("2"), ex("2")));
        // endpoint rules on the target
        assert!(!is_admissible(ex("1"), ex("inf"), ex("1"), ex("2")));
        assert!(is_admissible(ex("1"), ex("inf"), ex("1"), ex("inf")));
    }

    #[test]
    fn dual_quadruple_swaps_and_conjugates() {
        let quad = ExponentQuadruple::parse("3/2", "3", "3", "2").unwrap();
        let dual = quad.dual();
        assert_eq!(dual.source().principal(), ex("3/2"));
        assert_eq!(dual.source().secondary(), ex("2"));
        assert_eq!(dual.target().principal(), ex("3"));
        assert_eq!(dual.target().secondary(), ex("3/2"));
        assert_eq!(dual.dual(), quad);
    }
}
