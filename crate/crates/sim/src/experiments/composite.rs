//! Relaxation of perturbed composite and multi-characteristic-point waves:
//! the perturbed characteristic-point locations pin the limiting family
//! member; shocks and shape converge to it at the spectral rate.

use waves_core::num::fit::fit_log_slope;
use waves_core::{construct_family_member, FamilyShift, Nonlinearity, WaveProfile};

use crate::diag::{Comparison, ExperimentResult};
use crate::error::{Result, SimError};
use crate::experiments::run_to;
use crate::field::{init_field, locate_characteristic_point, Perturbation, SamplingSpec};
use crate::stepper::StepPolicy;

#[derive(Debug, Clone)]
pub struct CompositeParams {
    pub perturbation: Perturbation,
    pub t_final: f64,
    pub dt: f64,
    pub fit_window: (f64, f64),
    /// expected decay rate (theta of the wave) for the comparison
    pub theta: f64,
    /// relative tolerance on the fitted exponent
    pub theta_tol: f64,
    /// measurement window around the wave
    pub window: (f64, f64),
}

/// Evolve a stable composite (or family) wave under a small perturbation,
/// determine the limiting family member from the pinned characteristic
/// points of the initial data, and fit the decay of the synchronized shape
/// difference.
pub fn run_experiment_composite(
    nl: &Nonlinearity,
    profile: &WaveProfile,
    params: &CompositeParams,
) -> Result<ExperimentResult> {
    let verdict = waves_classify::classify(profile, nl);
    assert!(
        verdict.is_stable(),
        "the composite experiment needs a stable fixture: {verdict:?}"
    );
    let sigma = profile.sigma;
    let chars = profile.characteristic_points();
    let n_char = chars.len();

    // pinned locations from the perturbed initial data
    let mut pinned = Vec::with_capacity(n_char);
    for k in 0..n_char {
        pinned.push(locate_characteristic_point(profile, nl, &params.perturbation, k)?);
    }

    // the limiting wave: a family member for several characteristic points,
    // a translate for one
    let limit: WaveProfile = if n_char >= 2 {
        construct_family_member(nl, profile, &FamilyShift::new(pinned.clone()))?
    } else {
        profile.translated(pinned[0] - chars[0].0)
    };

    let spec = SamplingSpec {
        window: params.window,
        h_base: 4e-3,
        h_min: 2e-4,
        kappa: 0.02,
    };
    let mut field = init_field(profile, nl, &params.perturbation, &spec)?;
    let policy = StepPolicy {
        dt: params.dt,
        ..StepPolicy::default()
    };

    let mut pinned_value_err = 0.0f64;
    let mut result = ExperimentResult::new("composite");
    let series = &mut result.series;
    let measure_window = (params.window.0 + 2.0, params.window.1 - 2.0);
    run_to(&mut field, &policy, params.t_final, 50, |f| {
        let shift = sigma * f.t;
        // synchronized shape difference against the limit member
        let mut sup = 0.0f64;
        for region in &f.regions {
            for c in region.active() {
                let xi = c.pos - shift;
                if xi < measure_window.0 || xi > measure_window.1 {
                    continue;
                }
                // skip samples within a mesh width of the limit's jumps
                if limit
                    .discontinuities
                    .iter()
                    .any(|d| (xi - d.position).abs() < 0.02)
                {
                    continue;
                }
                sup = sup.max((c.val - limit.value(xi)).abs());
            }
        }
        // jump synchronization error
        let mut jump_err = 0.0f64;
        for (s, d) in f
            .shocks
            .iter()
            .filter(|s| s.alive)
            .zip(&limit.discontinuities)
        {
            jump_err = jump_err.max((s.pos - shift - d.position).abs());
        }
        // pinned values
        for (k, &psi) in pinned.iter().enumerate() {
            let v = f.value_at(psi + shift).unwrap_or(f64::NAN);
            pinned_value_err = pinned_value_err.max((v - chars[k].1).abs());
        }
        series.push(
            f.t,
            &[
                ("shape_diff", sup.max(jump_err)),
                ("value_diff", sup),
                ("jump_err", jump_err),
            ],
        );
    })?;

    // all background shocks must survive
    let expected_shocks = profile.discontinuities.len();
    let alive = field.shocks.iter().filter(|s| s.alive).count();
    if alive != expected_shocks {
        return Err(SimError::ShockLost(field.t));
    }

    let fit = fit_log_slope(
        &result.series.t,
        result.series.column("shape_diff").unwrap(),
        params.fit_window,
    )
    .expect("decay fit");
    result.fits.push(("shape decay".into(), fit));
    result.comparisons.push(Comparison::relative(
        "fitted decay exponent vs theta",
        params.theta,
        -fit.rate,
        params.theta_tol,
    ));
    result.comparisons.push(Comparison::absolute(
        "pinned characteristic values",
        0.0,
        pinned_value_err,
        1e-8,
    ));
    result.finish();
    Ok(result)
}
