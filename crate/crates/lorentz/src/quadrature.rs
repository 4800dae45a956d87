//! Weighted power integrals of linear segments.
//!
//! The norm code needs integrals of the form
//!
//!   int_rl^rr r^(e-1) g(r)^sigma dr,   g linear and >= 0 on [rl, rr],
//!
//! to near machine accuracy.  Three difficulties are handled explicitly:
//! the weight r^(e-1) is not analytic at r = 0, the factor g^sigma has a
//! branch point where g vanishes when sigma is not an integer, and cells
//! may span several octaves of r.  The strategy is exact formulas where
//! they exist (monomials through the origin, hairline cells), a binomial
//! series on origin cells with nonzero left value, and elsewhere
//! composite 16-point Gauss-Legendre on subcells of radius ratio at most
//! two, with dyadic grading plus an analytic two-term tail toward any
//! endpoint where g vanishes.

use std::sync::OnceLock;

/// Subcells whose width is below this fraction of the left radius are
/// treated with a frozen weight and the exact linear-power integral.
const HAIRLINE_REL: f64 = 1e-9;
/// Relative tolerance at which series and dyadic ladders are truncated.
const SERIES_EPS: f64 = 1e-17;

/// Nodes and weights of 16-point Gauss-Legendre quadrature on [-1, 1],
/// computed once by Newton iteration on the Legendre polynomial P_16.
pub fn gauss_legendre_16() -> &'static ([f64; 16], [f64; 16]) {
    static RULE: OnceLock<([f64; 16], [f64; 16])> = OnceLock::new();
    RULE.get_or_init(|| {
        const N: usize = 16;
        let mut nodes = [0.0_f64; N];
        let mut weights = [0.0_f64; N];
        for i in 0..N / 2 {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (N as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                // recurrence for P_N(x) and its derivative
                let (mut p0, mut p1) = (1.0_f64, x);
                for k in 2..=N {
                    let kf = k as f64;
                    let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                    p0 = p1;
                    p1 = p2;
                }
                dp = N as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            nodes[i] = -x;
            nodes[N - 1 - i] = x;
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            weights[i] = w;
            weights[N - 1 - i] = w;
        }
        (nodes, weights)
    })
}

/// Line through (rl, vl) with the given slope, clamped at zero to guard
/// against negative round-off under fractional powers.
#[derive(Debug, Clone, Copy)]
struct Line {
    rl: f64,
    vl: f64,
    slope: f64,
}

impl Line {
    fn at(&self, r: f64) -> f64 {
        (self.vl + self.slope * (r - self.rl)).max(0.0)
    }
}

fn gauss_segment(a: f64, b: f64, line: Line, e: f64, sigma: f64) -> f64 {
    let (nodes, weights) = gauss_legendre_16();
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut sum = 0.0;
    for (x, w) in nodes.iter().zip(weights) {
        let r = mid + half * x;
        sum += w * r.powf(e - 1.0) * line.at(r).powf(sigma);
    }
    sum * half
}

/// Exact integral of g^sigma over a width where the weight is frozen:
/// int g^sigma dr = width (vr^(sigma+1) - vl^(sigma+1)) /
/// ((sigma+1)(vr - vl)) for a linear g.
fn linear_power_mean(vl: f64, vr: f64, sigma: f64) -> f64 {
    if (vl - vr).abs() <= 1e-12 * vl.max(vr) {
        return (0.5 * (vl + vr)).powf(sigma);
    }
    (vr.powf(sigma + 1.0) - vl.powf(sigma + 1.0)) / ((sigma + 1.0) * (vr - vl))
}

/// Dyadic ladder from the interior point `a` toward the right endpoint
/// `b` where the line vanishes, finished with a two-term analytic tail.
fn graded_toward_right_zero(a: f64, b: f64, line: Line, e: f64, sigma: f64) -> f64 {
    let m = line.at(a) / (b - a);
    let mut total = 0.0;
    let mut left = a;
    for _ in 0..64 {
        let right = b - 0.5 * (b - left);
        let seg = gauss_segment(left, right, line, e, sigma);
        total += seg;
        left = right;
        if seg.abs() <= SERIES_EPS * total.abs() {
            break;
        }
    }
    let d = b - left;
    let tail = m.powf(sigma)
        * (b.powf(e - 1.0) * d.powf(sigma + 1.0) / (sigma + 1.0)
            - (e - 1.0) * b.powf(e - 2.0) * d.powf(sigma + 2.0) / (sigma + 2.0));
    total + tail
}

/// Mirror image of `graded_toward_right_zero` for a line vanishing at the
/// left endpoint `a` > 0.
fn graded_toward_left_zero(a: f64, b: f64, line: Line, e: f64, sigma: f64) -> f64 {
    let m = line.at(b) / (b - a);
    let mut total = 0.0;
    let mut right = b;
    for _ in 0..64 {
        let left = a + 0.5 * (right - a);
        let seg = gauss_segment(left, right, line, e, sigma);
        total += seg;
        right = left;
        if seg.abs() <= SERIES_EPS * total.abs() {
            break;
        }
    }
    let d = right - a;
    let tail = m.powf(sigma)
        * (a.powf(e - 1.0) * d.powf(sigma + 1.0) / (sigma + 1.0)
            + (e - 1.0) * a.powf(e - 2.0) * d.powf(sigma + 2.0) / (sigma + 2.0));
    total + tail
}

/// Binomial series for int_0^rc r^(e-1) (vl + b r)^sigma dr with
/// |b rc / vl| <= 1/2.
fn origin_series(rc: f64, vl: f64, b: f64, e: f64, sigma: f64) -> f64 {
    let x = b * rc / vl;
    let mut term = 1.0_f64;
    let mut sum = term / e;
    for k in 1..200 {
        let kf = k as f64;
        term *= (sigma - kf + 1.0) / kf * x;
        let add = term / (e + kf);
        sum += add;
        if add.abs() <= SERIES_EPS * sum.abs() {
            break;
        }
    }
    vl.powf(sigma) * rc.powf(e) * sum
}

fn is_integer(x: f64) -> bool {
    x == x.trunc()
}

fn integrate_positive_cell(rl: f64, rr: f64, vl: f64, vr: f64, e: f64, sigma: f64) -> f64 {
    let line = Line {
        rl,
        vl,
        slope: (vr - vl) / (rr - rl),
    };
    // hairline cell: freeze the weight, integrate the power exactly
    if rl > 0.0 && rr - rl <= HAIRLINE_REL * rl {
        let rm = 0.5 * (rl + rr);
        return (rr - rl) * rm.powf(e - 1.0) * linear_power_mean(vl, vr, sigma);
    }
    if rl == 0.0 {
        if vl == 0.0 {
            // pure monomial (slope r)^sigma against r^(e-1)
            let slope = vr / rr;
            return slope.powf(sigma) * rr.powf(e + sigma) / (e + sigma);
        }
        if line.slope == 0.0 {
            return vl.powf(sigma) * rr.powf(e) / e;
        }
        // series near the origin where |slope| r stays below vl / 2, then
        // recurse on the remainder which has rl > 0
        let rc = (0.5 * vl / line.slope.abs()).min(0.5 * rr);
        let head = origin_series(rc, vl, line.slope, e, sigma);
        return head + integrate_positive_cell(rc, rr, line.at(rc), vr, e, sigma);
    }
    // split into macro segments of radius ratio at most two
    let fractional = !is_integer(sigma);
    let mut total = 0.0;
    let mut a = rl;
    while a < rr {
        let b = (2.0 * a).min(rr);
        if fractional && b == rr && vr == 0.0 {
            total += graded_toward_right_zero(a, b, line, e, sigma);
        } else if fractional && a == rl && vl == 0.0 {
            total += graded_toward_left_zero(a, b, line, e, sigma);
        } else {
            total += gauss_segment(a, b, line, e, sigma);
        }
        a = b;
    }
    total
}

/// Integral int_rl^rr r^(e-1) g(r)^sigma dr for the linear segment g with
/// g(rl) = vl >= 0 and g(rr) = vr >= 0, accurate to near machine
/// precision for e > 0, sigma >= 1.
pub fn cell_weighted_power(rl: f64, rr: f64, vl: f64, vr: f64, e: f64, sigma: f64) -> f64 {
    debug_assert!(rl >= 0.0 && rr >= rl, "cell [{rl}, {rr}] out of order");
    debug_assert!(vl >= 0.0 && vr >= 0.0, "cell values must be nonnegative");
    debug_assert!(e > 0.0 && sigma >= 1.0, "need e > 0, sigma >= 1");
    if rr <= rl || (vl == 0.0 && vr == 0.0) {
        return 0.0;
    }
    integrate_positive_cell(rl, rr, vl, vr, e, sigma)
}

/// Supremum of r^c g(r) over [rl, rr] for the linear segment g >= 0.
///
/// The only interior candidate is the critical point of r^c (vl + s (r -
/// rl)), which solves c g + r g' = 0.
pub(crate) fn cell_weighted_sup(rl: f64, rr: f64, vl: f64, vr: f64, c: f64) -> f64 {
    let slope = if rr > rl { (vr - vl) / (rr - rl) } else { 0.0 };
    let mut best = rl.powf(c) * vl;
    best = best.max(rr.powf(c) * vr);
    if slope != 0.0 && c + 1.0 != 0.0 {
        let r_star = c * (slope * rl - vl) / (slope * (c + 1.0));
        if r_star > rl && r_star < rr {
            let g = (vl + slope * (r_star - rl)).max(0.0);
            best = best.max(r_star.powf(c) * g);
        }
    }
    best
}
