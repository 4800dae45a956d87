//! End-to-end curve extraction against the free heat flow, where the
//! mapping norms have closed forms: the mass-to-sup norm is exactly
//! (4 pi t)^(-N/2) and every L2-to-L2 ratio is at most one.  These
//! oracles pin down the whole chain of family construction, evolution,
//! anchored ratio maximization, and rate fitting with independently
//! known constants.

use std::f64::consts::PI;

use heatflow::TimeGridSpec;
use ratelab::{
    empirical_norm_curve, evolve_family, experiment_grid_for_family, extremal_family, fit_rate,
    l1_growth, observables_for_cells, parse_rational, sample_times, theoretical_rate, verdict,
    ExponentQuadruple, FamilyTrace, Verdict, TOL_DELTA, TOL_GAMMA,
};
use schrodinger::{solve_harmonic, Potential};

const T_END: f64 = 1e4;

fn free_run() -> Vec<FamilyTrace> {
    let grid = experiment_grid_for_family(3, T_END, false).unwrap();
    let potential = Potential::zero();
    let profile = solve_harmonic(&potential, &grid).unwrap();
    let family = extremal_family(&grid, &profile, T_END).unwrap();
    assert_eq!(family.len(), 4, "free family is bump plus three balls");
    let cells = [
        ExponentQuadruple::parse("1", "inf", "1", "inf").unwrap(),
        ExponentQuadruple::parse("1", "2", "1", "2").unwrap(),
        ExponentQuadruple::parse("2", "2", "2", "2").unwrap(),
    ];
    let observables = observables_for_cells(&cells);
    evolve_family(
        &potential,
        &family,
        &TimeGridSpec::standard(T_END),
        &observables,
    )
    .unwrap()
}

#[test]
fn free_flow_curves_match_the_heat_kernel_constants() {
    let traces = free_run();

    // Conservation sanity on every member: the free harmonic vector is
    // constant, so the pairing is the mass.
    for family_trace in &traces {
        let drift = family_trace.trace().pairing_drift();
        assert!(
            drift <= 1e-3,
            "{}: pairing drift {}",
            family_trace.label(),
            drift
        );
        let l2 = family_trace.trace().max_l2_ratio();
        assert!(
            l2 <= 1.0 + 1e-10,
            "{}: L2 ratio {}",
            family_trace.label(),
            l2
        );
    }

    // Mass-to-sup: the exact mapping norm is (4 pi t)^(-3/2) and the
    // spread-out family members approach it from below; the upper edge
    // allows the per-mil gap between the discrete conserved mass and
    // the piecewise-linear quadrature of the datum.
    let cell = ExponentQuadruple::parse("1", "inf", "1", "inf").unwrap();
    let times = sample_times(1.0, T_END, 8);
    let curve = empirical_norm_curve(&traces, &cell, &times).unwrap();
    for sample in curve.samples() {
        if sample.t < 1e2 {
            continue;
        }
        let scaled = sample.value * (4.0 * PI * sample.t).powf(1.5);
        assert!(
            (0.5..=1.005).contains(&scaled),
            "t = {}: scaled estimate {} from {} anchored at {}",
            sample.t,
            scaled,
            sample.member,
            sample.anchor
        );
    }

    // L2 self-ratios never exceed one.
    let diagonal = ExponentQuadruple::parse("2", "2", "2", "2").unwrap();
    let curve = empirical_norm_curve(&traces, &diagonal, &times).unwrap();
    for sample in curve.samples() {
        assert!(
            sample.value <= 1.0 + 1e-6,
            "t = {}: contraction violated with {}",
            sample.t,
            sample.value
        );
    }

    // Mass norms are conserved, so their fitted growth vanishes.
    let mass_fit = l1_growth(traces[0].trace()).unwrap();
    assert!(mass_fit.gamma().abs() < 0.01, "gamma {}", mass_fit.gamma());

    // One smoothing cell fitted end to end against the predicted free
    // rate: mass to L2 decays like t^(-3/4) with no log factor.
    let cell = ExponentQuadruple::parse("1", "2", "1", "2").unwrap();
    let curve = empirical_norm_curve(&traces, &cell, &sample_times(1.0, T_END, 16)).unwrap();
    let fit = fit_rate(&curve).unwrap();
    let theory = theoretical_rate(3, parse_rational("0").unwrap(), &cell).unwrap();
    assert!((theory.gamma_f64() + 0.75).abs() < 1e-12);
    assert!(
        (fit.gamma() - theory.gamma_f64()).abs() <= TOL_GAMMA,
        "gamma {} vs {}",
        fit.gamma(),
        theory.gamma_f64()
    );
    assert!(
        (fit.delta().unwrap() - theory.delta_f64()).abs() <= TOL_DELTA,
        "delta {:?}",
        fit.delta()
    );
    assert_eq!(
        verdict(&fit, &theory, TOL_GAMMA, TOL_DELTA),
        Verdict::Pass
    );
}
