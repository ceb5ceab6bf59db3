//! End-to-end runs of the named experiments on their fixtures.

use std::f64::consts::PI;

use waves_core::catalog;
use waves_sim::experiments::*;
use waves_sim::Perturbation;

#[test]
fn infinity_growth_and_norm_floors() {
    let nl = catalog::figure().unwrap();
    let wave = catalog::unstable_constant(&nl).unwrap();
    let result = run_experiment_infinity(&nl, &wave, &InfinityParams::default()).unwrap();
    for c in &result.comparisons {
        assert!(c.pass, "{}: predicted {} measured {}", c.name, c.predicted, c.measured);
    }
    // the measured growth rate matches g'(0) = pi
    let fit = result.fit("amplitude growth").unwrap();
    assert!((fit.rate - PI).abs() < 0.05 * PI, "growth {}", fit.rate);
}

#[test]
fn charpoint_blowup_matches_the_closed_form() {
    let nl = catalog::breaking().unwrap();
    let wave = catalog::breaking_front(&nl).unwrap();
    let result = run_experiment_charpoint(&nl, &wave, &CharpointParams::default()).unwrap();
    for c in &result.comparisons {
        assert!(c.pass, "{}: predicted {} measured {}", c.name, c.predicted, c.measured);
    }
    // r = 0.1 with g' = -pi: T = ln(1/11)/(-pi)
    let t_cmp = result.comparison("predicted blow-up time").unwrap();
    assert!((t_cmp.predicted - (0.1f64 / 1.1).ln() / (-PI)).abs() < 1e-12);
    assert!((t_cmp.predicted - 0.7633).abs() < 1e-3);
}

#[test]
fn shock_offset_grows_at_the_jump_rate() {
    let nl = catalog::figure().unwrap();
    let wave = catalog::figure_glued_pair(&nl, 0.5).unwrap();
    let result = run_experiment_shock(&nl, &wave, &ShockParams::default()).unwrap();
    for c in &result.comparisons {
        assert!(c.pass, "{}: predicted {} measured {}", c.name, c.predicted, c.measured);
    }
    let fit = result.fit("offset growth").unwrap();
    assert!((fit.rate - 2.0).abs() < 0.1, "rate {}", fit.rate);
}

#[test]
fn front_decay_at_theta_with_exact_pinning() {
    let nl = catalog::figure().unwrap();
    let wave = catalog::figure_front_tight(&nl).unwrap();
    let result = run_experiment_front_decay(&nl, &wave, &FrontDecayParams::default()).unwrap();
    for c in &result.comparisons {
        assert!(c.pass, "{}: predicted {} measured {}", c.name, c.predicted, c.measured);
    }
}

#[test]
fn small_shock_drift_and_amplitude() {
    let nl = catalog::figure().unwrap();
    let wave = catalog::figure_front_tight(&nl).unwrap();
    let result = run_experiment_small_shock(&nl, &wave, &SmallShockParams::default()).unwrap();
    for c in &result.comparisons {
        assert!(c.pass, "{}: predicted {} measured {}", c.name, c.predicted, c.measured);
    }
}

#[test]
fn composite_zero_perturbation_is_stationary() {
    let nl = catalog::figure().unwrap();
    let wave = catalog::figure_double(&nl).unwrap();
    let params = CompositeParams {
        perturbation: Perturbation::None,
        t_final: 1.0,
        dt: 1e-3,
        fit_window: (0.2, 0.9),
        theta: 1.0,
        theta_tol: 1e9, // no decay to fit for the identity case
        window: (-9.0, 9.0),
    };
    let result = run_experiment_composite(&nl, &wave, &params).unwrap();
    let shape = result.series.column("shape_diff").unwrap();
    for (t, v) in result.series.t.iter().zip(shape) {
        assert!(*v <= 1e-9, "shape diff {v} at t={t}");
    }
}

#[test]
fn double_composite_relaxes_at_its_theta() {
    let nl = catalog::figure().unwrap();
    let wave = catalog::figure_double(&nl).unwrap();
    let report = waves_classify::spectral_report(&wave, &nl, 2);
    let theta = report.theta.unwrap();
    let params = CompositeParams {
        perturbation: Perturbation::Sum(vec![
            Perturbation::Bump {
                amplitude: 1e-3,
                center: 0.3,
                width: 1.0,
            },
            Perturbation::Bump {
                amplitude: -8e-4,
                center: -1.0,
                width: 0.8,
            },
        ]),
        t_final: 16.0,
        dt: 1e-3,
        fit_window: (5.0, 14.0),
        theta,
        theta_tol: 0.15,
        window: (-9.0, 9.0),
    };
    let result = run_experiment_composite(&nl, &wave, &params).unwrap();
    for c in &result.comparisons {
        assert!(c.pass, "{}: predicted {} measured {}", c.name, c.predicted, c.measured);
    }
}

#[test]
fn family_wave_converges_to_the_shifted_member() {
    let nl = catalog::quartic_pair().unwrap();
    let wave = catalog::quartic_family_wave(&nl, 0.5).unwrap();
    let chars = wave.characteristic_points();
    // shift the second characteristic point by ~5e-3
    let params = CompositeParams {
        perturbation: Perturbation::ProfileShift {
            delta: 5e-3,
            center: chars[1].0,
            width: 0.6,
        },
        t_final: 7.0,
        dt: 1e-3,
        fit_window: (2.0, 6.3),
        theta: 2.0,
        theta_tol: 0.15,
        window: (-8.0, 10.0),
    };
    let result = run_experiment_composite(&nl, &wave, &params).unwrap();
    for c in &result.comparisons {
        assert!(c.pass, "{}: predicted {} measured {}", c.name, c.predicted, c.measured);
    }
}
