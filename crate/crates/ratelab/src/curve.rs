//! Empirical operator-norm lower-bound curves.
//!
//! For an exponent quadruple (p, q, sigma, theta) the mapping norm of
//! exp(-tH) is bounded below by
//!
//!   N(t) >= || u_psi(s + t) ||_{q,theta} / || u_psi(s) ||_{p,sigma}
//!
//! for any family member psi and anchor time s, because u_psi(s + t) is
//! exp(-tH) applied to u_psi(s).  Each member therefore needs a single
//! long evolution; the curve builder reads the recorded norm series,
//! takes the best ratio over members and a dyadic anchor set, and keeps
//! the provenance of every winning ratio.  Sample values at off-record
//! times come from log-log interpolation of the per-step series, whose
//! relative spacing is about 2%, so the interpolation error is far below
//! the fit tolerances.

use std::sync::Arc;
use std::thread;

use heatflow::{evolve, EvolutionTrace, Observables, TimeGrid, TimeGridSpec};
use lorentz::{lorentz_norm, Exponent, ExponentQuadruple, LorentzExponents};
use schrodinger::Potential;

use crate::{FamilyMember, RateLabError};

/// Relative tolerance for recognizing exact schedule landings and for
/// validating geometric sample spacing.
const TIME_MATCH_REL: f64 = 1e-9;

/// Source norms below this are treated as underflow rather than as
/// legitimate denominators.
const DENOMINATOR_FLOOR: f64 = 1e-280;

/// One lower-bound estimate together with the member and anchor that
/// produced it.
#[derive(Debug, Clone)]
pub struct CurveSample {
    pub t: f64,
    pub value: f64,
    /// Label of the family member whose ratio won.
    pub member: String,
    /// Anchor time s of the winning ratio.
    pub anchor: f64,
}

/// A lower-bound curve for one exponent quadruple, sampled on a
/// geometric time grid.
#[derive(Debug, Clone)]
pub struct NormCurve {
    quad: ExponentQuadruple,
    samples: Vec<CurveSample>,
}

impl NormCurve {
    fn new(quad: ExponentQuadruple, samples: Vec<CurveSample>) -> Result<Self, RateLabError> {
        if samples.len() < 2 {
            return Err(RateLabError::TooFewSamples {
                need: 2,
                got: samples.len(),
            });
        }
        let ratio = samples[1].t / samples[0].t;
        for pair in samples.windows(2) {
            let r = pair[1].t / pair[0].t;
            if !(r > 1.0) || (r / ratio - 1.0).abs() > 1e-6 {
                return Err(RateLabError::BadSampleTimes(format!(
                    "spacing {} then {} is not geometric",
                    ratio, r
                )));
            }
        }
        for s in &samples {
            if !(s.value > 0.0 && s.value.is_finite()) {
                return Err(RateLabError::BadEstimate {
                    t: s.t,
                    value: s.value,
                });
            }
        }
        Ok(Self { quad, samples })
    }

    pub fn quad(&self) -> &ExponentQuadruple {
        &self.quad
    }

    pub fn samples(&self) -> &[CurveSample] {
        &self.samples
    }

    /// The (t, estimate) pairs without provenance.
    pub fn sample_pairs(&self) -> Vec<(f64, f64)> {
        self.samples.iter().map(|s| (s.t, s.value)).collect()
    }
}

/// Geometric sample times from about `t_lo` up to exactly `t_end`, with
/// the given resolution.  The grid is anchored at `t_end` so the last
/// sample is exact.
pub fn sample_times(t_lo: f64, t_end: f64, per_decade: usize) -> Vec<f64> {
    assert!(t_lo > 0.0 && t_end > t_lo && per_decade > 0);
    let count = ((t_end / t_lo).log10() * per_decade as f64).round() as i32;
    (0..=count)
        .map(|k| t_end * 10f64.powf(-f64::from(count - k) / per_decade as f64))
        .collect()
}

/// One evolved family member.
#[derive(Debug)]
pub struct FamilyTrace {
    label: String,
    trace: EvolutionTrace,
}

impl FamilyTrace {
    pub fn new(label: impl Into<String>, trace: EvolutionTrace) -> Self {
        Self {
            label: label.into(),
            trace,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn trace(&self) -> &EvolutionTrace {
        &self.trace
    }
}

/// The observables an evolution must record so that curves for the
/// given cells can be assembled afterwards.  Mass and L2 series are
/// always included for conservation and contraction cross-checks.
pub fn observables_for_cells(cells: &[ExponentQuadruple]) -> Observables {
    let mut lorentz = vec![
        LorentzExponents::diagonal(Exponent::ONE),
        LorentzExponents::diagonal(Exponent::TWO),
    ];
    for cell in cells {
        for pair in [cell.source(), cell.target()] {
            if !lorentz.contains(&pair) {
                lorentz.push(pair);
            }
        }
    }
    Observables {
        lorentz,
        truncated: Vec::new(),
    }
}

/// Evolves every family member once under the shared schedule.  Members
/// are independent, so they run on their own threads; results come back
/// in family order regardless of completion order.
pub fn evolve_family(
    potential: &Potential,
    members: &[FamilyMember],
    spec: &TimeGridSpec,
    observables: &Observables,
) -> Result<Vec<FamilyTrace>, RateLabError> {
    if members.is_empty() {
        return Err(RateLabError::EmptyFamily);
    }
    let time = TimeGrid::from_spec(spec)?;
    let traces = thread::scope(|scope| {
        let handles: Vec<_> = members
            .iter()
            .map(|member| {
                let time = &time;
                scope.spawn(move || evolve(potential, member.datum(), time, observables))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("evolution thread panicked"))
            .collect::<Vec<_>>()
    });
    members
        .iter()
        .zip(traces)
        .map(|(member, trace)| Ok(FamilyTrace::new(member.label(), trace?)))
        .collect()
}

fn interp_loglog(series: &[(f64, f64)], x: f64) -> f64 {
    let idx = series.partition_point(|(t, _)| *t < x);
    if idx == 0 {
        return series[0].1;
    }
    if idx >= series.len() {
        return series[series.len() - 1].1;
    }
    let (ta, va) = series[idx - 1];
    let (tb, vb) = series[idx];
    if (tb - x).abs() <= TIME_MATCH_REL * (1.0 + x) {
        return vb;
    }
    if (ta - x).abs() <= TIME_MATCH_REL * (1.0 + x) {
        return va;
    }
    if ta > 0.0 && va > 0.0 && vb > 0.0 {
        let w = (x.ln() - ta.ln()) / (tb.ln() - ta.ln());
        (va.ln() * (1.0 - w) + vb.ln() * w).exp()
    } else {
        let w = (x - ta) / (tb - ta);
        va * (1.0 - w) + vb * w
    }
}

/// Anchor times for the ratio device: the run start plus the powers of
/// two up to half the horizon, kept only where the schedule landed
/// exactly.
fn anchor_times(series: &[(f64, f64)], t_end: f64) -> Vec<(f64, f64)> {
    let mut anchors = vec![series[0]];
    let mut s = 2.0;
    while s <= 0.5 * t_end * (1.0 + TIME_MATCH_REL) {
        let idx = series.partition_point(|(t, _)| *t < s * (1.0 - TIME_MATCH_REL));
        if idx < series.len() && (series[idx].0 - s).abs() <= TIME_MATCH_REL * (1.0 + s) {
            anchors.push(series[idx]);
        }
        s *= 2.0;
    }
    anchors
}

/// Builds the lower-bound curve for one quadruple from evolved family
/// traces, maximizing the anchored norm ratio over members and anchors.
pub fn empirical_norm_curve(
    traces: &[FamilyTrace],
    quad: &ExponentQuadruple,
    times: &[f64],
) -> Result<NormCurve, RateLabError> {
    if traces.is_empty() {
        return Err(RateLabError::EmptyFamily);
    }
    if times.len() < 2 {
        return Err(RateLabError::TooFewSamples {
            need: 2,
            got: times.len(),
        });
    }
    let mut best: Vec<Option<CurveSample>> = vec![None; times.len()];
    for family_trace in traces {
        let trace = family_trace.trace();
        let label = family_trace.label();
        let source = trace
            .lorentz_series(quad.source())
            .ok_or_else(|| RateLabError::MissingObservable(format!("{}", quad.source())))?;
        let target = trace
            .lorentz_series(quad.target())
            .ok_or_else(|| RateLabError::MissingObservable(format!("{}", quad.target())))?;
        let t_end = target.last().map(|(t, _)| *t).unwrap_or(0.0);
        let anchors = anchor_times(&source, t_end);
        for (anchor, denominator) in anchors {
            if !(denominator.is_finite()) || denominator.abs() < DENOMINATOR_FLOOR {
                return Err(RateLabError::DenominatorUnderflow {
                    t: anchor,
                    member: label.to_string(),
                });
            }
            for (slot, &t) in best.iter_mut().zip(times) {
                if anchor + t > t_end * (1.0 + TIME_MATCH_REL) {
                    continue;
                }
                let value = interp_loglog(&target, anchor + t) / denominator;
                if slot.as_ref().map_or(true, |s| value > s.value) {
                    *slot = Some(CurveSample {
                        t,
                        value,
                        member: label.to_string(),
                        anchor,
                    });
                }
            }
        }
    }
    let samples = best
        .into_iter()
        .zip(times)
        .map(|(slot, &t)| {
            slot.ok_or(RateLabError::BadEstimate {
                t,
                value: f64::NAN,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    NormCurve::new(*quad, samples)
}

/// Running supremum over t >= 2 of the exterior-truncated norm of the
/// solution, relative to the datum norm: with chi the indicator of
/// { r >= delta_cut sqrt(1 + t) } this is
///
///   sup_{t >= 2} || chi u(t) ||_{p,sigma} / || u(0) ||_{p,sigma},
///
/// which should stay bounded for diagonal pairs with p > 2.  The trace
/// must have recorded the matching truncated series.
pub fn truncated_boundedness(
    trace: &EvolutionTrace,
    quad: &ExponentQuadruple,
    delta_cut: f64,
) -> Result<f64, RateLabError> {
    let pair = quad.source();
    if pair != quad.target() {
        return Err(RateLabError::BadTruncationExponents(format!("{}", quad)));
    }
    if pair.principal() <= Exponent::TWO {
        return Err(RateLabError::BadTruncationExponents(format!("{}", quad)));
    }
    let series = trace
        .truncated_series(pair, delta_cut)
        .ok_or_else(|| RateLabError::MissingObservable(format!("{} outside cut", pair)))?;
    let datum = trace
        .snapshots
        .first()
        .ok_or(RateLabError::TooFewSamples { need: 1, got: 0 })?;
    let denominator = lorentz_norm(&datum.1, pair)?;
    if denominator < DENOMINATOR_FLOOR {
        return Err(RateLabError::DenominatorUnderflow {
            t: datum.0,
            member: "datum".to_string(),
        });
    }
    let sup = series
        .iter()
        .filter(|(t, _)| *t >= 2.0)
        .map(|(_, v)| v / denominator)
        .fold(f64::NEG_INFINITY, f64::max);
    if sup.is_finite() {
        Ok(sup)
    } else {
        Err(RateLabError::TooFewSamples { need: 1, got: 0 })
    }
}

/// A shared experiment setup: grid sized for the horizon with ramp
/// nodes at every family jump radius.
pub fn experiment_grid_for_family(
    dim: u32,
    t_end: f64,
    critical: bool,
) -> Result<Arc<lorentz::RadialGrid>, RateLabError> {
    Ok(heatflow::experiment_grid(
        dim,
        t_end,
        &crate::family_jump_radii(t_end, critical),
    )?)
}
