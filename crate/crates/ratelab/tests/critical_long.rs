//! Long-horizon curve extraction for the critical potential: the
//! logarithmic factors at the upper threshold exponent and the
//! second-exponent gap at the lower threshold both need six decades of
//! evolution before the ln ln t regressor has enough spread.

use heatflow::TimeGridSpec;
use ratelab::{
    empirical_norm_curve, evolve_family, experiment_grid_for_family, extremal_family, fit_rate,
    observables_for_cells, parse_rational, sample_times, theoretical_rate, verdict,
    ExponentQuadruple, Verdict, TOL_DELTA, TOL_GAMMA,
};
use schrodinger::{solve_harmonic, Potential};

const T_END: f64 = 1e6;

#[test]
fn log_factors_and_second_exponent_gap_emerge_over_six_decades() {
    let grid = experiment_grid_for_family(3, T_END, true).unwrap();
    let potential = Potential::ground_state(3, 1.0).unwrap();
    let profile = solve_harmonic(&potential, &grid).unwrap();
    let family = extremal_family(&grid, &profile, T_END).unwrap();

    // Upper-threshold cells with the three secondary exponents, and the
    // lower-threshold pair whose log powers must differ by 2/3.
    let theta_cells: Vec<ExponentQuadruple> = ["1", "2", "inf"]
        .iter()
        .map(|theta| ExponentQuadruple::parse("1", "3", "1", theta).unwrap())
        .collect();
    let sigma_cells: Vec<ExponentQuadruple> = ["1", "3"]
        .iter()
        .map(|sigma| ExponentQuadruple::parse("3/2", "3", sigma, "2").unwrap())
        .collect();
    let mut all = theta_cells.clone();
    all.extend(sigma_cells.iter().cloned());
    let observables = observables_for_cells(&all);

    let traces = evolve_family(
        &potential,
        &family,
        &TimeGridSpec::standard(T_END),
        &observables,
    )
    .unwrap();
    for family_trace in &traces {
        assert!(family_trace.trace().pairing_drift() <= 1e-3);
        assert!(family_trace.trace().max_l2_ratio() <= 1.0 + 1e-10);
    }

    let times = sample_times(1.0, T_END, 16);
    let a = parse_rational("1").unwrap();
    let expected_delta = [1.0, 0.5, 0.0];
    for (cell, want_delta) in theta_cells.iter().zip(expected_delta) {
        let curve = empirical_norm_curve(&traces, cell, &times).unwrap();
        let fit = fit_rate(&curve).unwrap();
        let theory = theoretical_rate(3, a, cell).unwrap();
        eprintln!(
            "{}: gamma {:+.4} delta {:+.4} (theory {:+.4}, {:+.4})",
            cell,
            fit.gamma(),
            fit.delta().unwrap_or(f64::NAN),
            theory.gamma_f64(),
            theory.delta_f64()
        );
        assert!((theory.delta_f64() - want_delta).abs() < 1e-12);
        assert!(
            (fit.gamma() + 0.5).abs() <= TOL_GAMMA,
            "{}: gamma {}",
            cell,
            fit.gamma()
        );
        assert!(
            (fit.delta().unwrap() - want_delta).abs() <= TOL_DELTA,
            "{}: delta {:?}",
            cell,
            fit.delta()
        );
        assert_eq!(verdict(&fit, &theory, TOL_GAMMA, TOL_DELTA), Verdict::Pass);
    }

    let mut gap_fits = Vec::new();
    for cell in &sigma_cells {
        let curve = empirical_norm_curve(&traces, cell, &times).unwrap();
        let fit = fit_rate(&curve).unwrap();
        eprintln!(
            "{}: gamma {:+.4} delta {:+.4}",
            cell,
            fit.gamma(),
            fit.delta().unwrap_or(f64::NAN)
        );
        assert!(
            (fit.gamma() + 0.5).abs() <= TOL_GAMMA,
            "{}: gamma {}",
            cell,
            fit.gamma()
        );
        gap_fits.push(fit);
    }
    let gap = gap_fits[1].delta().unwrap() - gap_fits[0].delta().unwrap();
    assert!(
        (gap - 2.0 / 3.0).abs() <= 0.2,
        "second-exponent gap {} vs 2/3",
        gap
    );
}
