//! Instability at a non-damping endstate: a small bump seeded deep in the
//! tail grows exponentially at rate `g'(u_inf)` until it reaches a
//! macroscopic threshold.

use waves_core::num::{bump, quad};
use waves_core::{Nonlinearity, WaveProfile};

use crate::diag::{Comparison, ExperimentResult};
use crate::error::Result;
use crate::experiments::{lp_positive_part, run_to, sup_over_chars};
use crate::field::{init_field, Perturbation, SamplingSpec};
use crate::stepper::StepPolicy;

#[derive(Debug, Clone, Copy)]
pub struct InfinityParams {
    pub eps: f64,
    pub dt: f64,
}

impl Default for InfinityParams {
    fn default() -> Self {
        Self { eps: 0.1, dt: 1e-3 }
    }
}

/// `delta_0` from the proof's construction: the largest level with
/// `exp(delta_0 sup|g''| / g'(u_inf)) <= 2`, the sup over
/// `|u - u_inf| <= 8 delta_0`.
fn proof_delta0(nl: &Nonlinearity, u_inf: f64) -> f64 {
    let g1 = nl.g1(u_inf);
    let mut delta = 0.5;
    for _ in 0..60 {
        let mut g2_max = 0.0f64;
        for i in 0..=200 {
            let u = u_inf - 8.0 * delta + 16.0 * delta * i as f64 / 200.0;
            if nl.contains(u) {
                g2_max = g2_max.max(nl.g2(u).abs());
            }
        }
        let ok = (delta * g2_max / g1).exp() <= 2.0;
        if ok {
            break;
        }
        delta *= 0.8;
    }
    delta
}

/// Evolve `u(0) = U + eps^2 chi(eps x - 1/eps)` to
/// `T_eps = ln(2 delta_0/(eps^2 ||chi||_inf)) / g'(u_inf)` and record the
/// per-characteristic sandwich ratios and the final positive-part norms.
pub fn run_experiment_infinity(
    nl: &Nonlinearity,
    profile: &WaveProfile,
    params: &InfinityParams,
) -> Result<ExperimentResult> {
    let eps = params.eps;
    let u_inf = profile.endstates.1;
    let g1 = nl.g1(u_inf);
    assert!(
        g1 > 0.0,
        "the instability-at-infinity fixture needs g'(u_inf) > 0"
    );
    let delta0 = proof_delta0(nl, u_inf);
    let chi_sup = bump::bump(0.0);
    let t_eps = (2.0 * delta0 / (eps * eps * chi_sup)).ln() / g1;

    // support of the seed: x in (1/eps^2, 1/eps^2 + 1/eps)
    let s_lo = 1.0 / (eps * eps);
    let s_hi = s_lo + 1.0 / eps;
    let spec = SamplingSpec::new((s_lo - 2.0, s_hi + 2.0), 0.01 / eps.min(1.0));
    let perturbation = Perturbation::TailSeed { eps };
    let mut field = init_field(profile, nl, &perturbation, &spec)?;

    // remember the initial deviation per characteristic for the sandwich
    let initial: Vec<Vec<f64>> = field
        .regions
        .iter()
        .map(|r| r.chars.iter().map(|c| (c.val - u_inf).abs()).collect())
        .collect();

    let mut result = ExperimentResult::new("infinity");
    let policy = StepPolicy {
        dt: params.dt,
        ..StepPolicy::default()
    };
    let mut sandwich_min = f64::INFINITY;
    let mut sandwich_max = 0.0f64;
    let initial_ref = &initial;
    let series = &mut result.series;
    let min_seed = 1e-12 * eps * eps;
    run_to(&mut field, &policy, t_eps, 50, |f| {
        let amp = sup_over_chars(f, (f64::NEG_INFINITY, f64::INFINITY), |c| {
            (c.val - u_inf).abs()
        });
        let growth = (g1 * f.t).exp();
        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        for (ri, region) in f.regions.iter().enumerate() {
            for (ci, c) in region.chars.iter().enumerate() {
                let a0 = initial_ref[ri][ci];
                if a0 > min_seed {
                    let ratio = (c.val - u_inf).abs() / (a0 * growth);
                    lo = lo.min(ratio);
                    hi = hi.max(ratio);
                }
            }
        }
        sandwich_min = sandwich_min.min(lo);
        sandwich_max = sandwich_max.max(hi);
        series.push(
            f.t,
            &[
                ("amplitude", amp),
                ("sandwich_min", lo),
                ("sandwich_max", hi),
            ],
        );
    })?;

    result.comparisons.push(Comparison::bound(
        "sandwich lower factor >= 1/2",
        sandwich_min,
        0.5,
        f64::INFINITY,
    ));
    result.comparisons.push(Comparison::bound(
        "sandwich upper factor <= 2",
        sandwich_max,
        0.0,
        2.0,
    ));

    // final L^p norms against the proof's delta'
    let chi_norm = |p: f64| -> f64 {
        if p.is_infinite() {
            chi_sup
        } else {
            quad::integrate(|s| bump::bump(2.0 * s - 1.0).powf(p), 0.0, 1.0, 1e-12)
                .powf(1.0 / p)
        }
    };
    let delta_prime = [1.0, 2.0, f64::INFINITY]
        .iter()
        .map(|&p| 2.0f64.powf(-1.0 / p) * chi_norm(p) / chi_sup)
        .fold(f64::INFINITY, f64::min)
        * delta0;
    for p in [1.0, 2.0, f64::INFINITY] {
        let measured = lp_positive_part(&field, u_inf, p);
        result.comparisons.push(Comparison::bound(
            &format!("final L^{p} positive-part norm >= delta'"),
            measured,
            delta_prime,
            f64::INFINITY,
        ));
    }

    // measured doubling of the blow-up horizon when eps halves: first
    // crossing of the level delta_0
    let crossing = |field_eps: f64| -> Result<f64> {
        let spec = SamplingSpec::new(
            (1.0 / (field_eps * field_eps) - 2.0, 1.0 / (field_eps * field_eps) + 1.0 / field_eps + 2.0),
            0.01 / field_eps.min(1.0),
        );
        let mut fld = init_field(profile, nl, &Perturbation::TailSeed { eps: field_eps }, &spec)?;
        let mut t_cross = f64::NAN;
        let horizon = (2.0 * delta0 / (field_eps * field_eps * chi_sup)).ln() / g1 + 1.0;
        run_to(&mut fld, &policy, horizon, 5, |f| {
            if t_cross.is_nan() {
                let amp = sup_over_chars(f, (f64::NEG_INFINITY, f64::INFINITY), |c| {
                    (c.val - u_inf).abs()
                });
                if amp >= delta0 {
                    t_cross = f.t;
                }
            }
        })?;
        Ok(t_cross)
    };
    let t1 = crossing(eps)?;
    let t2 = crossing(eps / 2.0)?;
    result.comparisons.push(Comparison::relative(
        "horizon shift under eps halving = 2 ln2 / g'",
        2.0 * 2.0f64.ln() / g1,
        t2 - t1,
        0.02,
    ));

    result.fits.push((
        "amplitude growth".into(),
        waves_core::num::fit::fit_log_slope(
            &result.series.t,
            result.series.column("amplitude").unwrap(),
            (0.1 * t_eps, 0.9 * t_eps),
        )
        .expect("growth fit"),
    ));
    result.finish();
    Ok(result)
}
