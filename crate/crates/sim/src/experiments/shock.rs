//! Shock-position instability: an offset of an amplifying jump grows
//! exponentially at the jump quotient rate. The perturbed solution keeps
//! the frozen one-sided profiles; only the jump location moves, following
//! `sigma + psi' = s_0(d_0 + psi)`.

use waves_core::builders::PieceExtender;
use waves_core::num::fit::fit_log_slope;
use waves_core::num::ode::{dopri5, DenseSolution, OdeOptions, OdeOutcome};
use waves_core::{Nonlinearity, WaveProfile};

use crate::diag::{Comparison, ExperimentResult};
use crate::error::Result;

#[derive(Debug, Clone, Copy)]
pub struct ShockParams {
    /// initial offset of the jump position
    pub eps: f64,
}

impl Default for ShockParams {
    fn default() -> Self {
        Self { eps: 1e-4 }
    }
}

/// `eta` from the proof's construction: the window half-width 32 eta must
/// stay inside the smooth pieces and the curvature of the slope function
/// must not distort the exponential by more than a factor 2.
fn proof_eta(profile: &WaveProfile, s0: &dyn Fn(f64) -> f64, d0: f64, rate: f64) -> f64 {
    let mut clearance = f64::INFINITY;
    for (x_star, _) in profile.characteristic_points() {
        clearance = clearance.min((x_star - d0).abs());
    }
    let mut eta = 0.9 * clearance / 32.0;
    loop {
        // max |s0''| on the window by finite differences
        let mut s2_max = 0.0f64;
        let h = eta * 0.05;
        for i in -20..=20 {
            let x = d0 + 32.0 * eta * i as f64 / 20.0;
            let s2 = (s0(x + h) - 2.0 * s0(x) + s0(x - h)) / (h * h);
            s2_max = s2_max.max(s2.abs());
        }
        if (32.0 * eta * s2_max / rate).exp() <= 2.0 || eta < 1e-6 {
            return eta;
        }
        eta *= 0.8;
    }
}

/// Offset the amplifying jump by `eps` and integrate the Rankine-Hugoniot
/// position ODE on the frozen one-sided profile extensions; the offset must
/// stay inside the proof's exponential sandwich up to
/// `T_eps = ln(8 eta / eps)/rate`.
pub fn run_experiment_shock(
    nl: &Nonlinearity,
    profile: &WaveProfile,
    params: &ShockParams,
) -> Result<ExperimentResult> {
    let jump = profile
        .discontinuities
        .iter()
        .find(|j| profile.jump_eigenvalue(nl, j) > 0.0)
        .expect("the fixture needs an amplifying jump");
    let d0 = jump.position;
    let rate = profile.jump_eigenvalue(nl, jump);

    // frozen one-sided extensions, tabulated on the working window
    let left_piece = &profile.pieces[profile.piece_index(d0 - 1e-9)];
    let right_piece = &profile.pieces[profile.piece_index(d0 + 1e-9)];
    let ext_l = PieceExtender::new(nl, profile.sigma, left_piece);
    let ext_r = PieceExtender::new(nl, profile.sigma, right_piece);
    let span = 0.6;
    let n_tab = 4000usize;
    let xs: Vec<f64> = (0..=n_tab)
        .map(|i| d0 - span + 2.0 * span * i as f64 / n_tab as f64)
        .collect();
    let ul_tab: Vec<f64> = xs.iter().map(|&x| ext_l.eval(x)).collect();
    let ur_tab: Vec<f64> = xs.iter().map(|&x| ext_r.eval(x)).collect();
    let tab = move |table: &[f64], x: f64| -> f64 {
        let h = 2.0 * span / n_tab as f64;
        let idx = (((x - (d0 - span)) / h).floor() as usize).min(n_tab - 1);
        let t = (x - (d0 - span + idx as f64 * h)) / h;
        table[idx] * (1.0 - t) + table[idx + 1] * t
    };
    let s0 = {
        let ul_tab = ul_tab.clone();
        let ur_tab = ur_tab.clone();
        move |x: f64| -> f64 {
            let ul = tab(&ul_tab, x);
            let ur = tab(&ur_tab, x);
            waves_core::slope(nl, ul, ur)
        }
    };
    // sanity of the construction: s0(d0) = sigma, s0'(d0) = rate
    debug_assert!((s0(d0) - profile.sigma).abs() < 1e-8);

    let eta = proof_eta(profile, &s0, d0, rate);
    let eps = params.eps.min(eta / 2.0);
    let t_eps = (8.0 * eta / eps).ln() / rate;

    let mut result = ExperimentResult::new("shock");
    let mut fitted = Vec::new();
    for sign in [1.0f64, -1.0] {
        let sigma = profile.sigma;
        let rhs = |_t: f64, psi: f64| s0(d0 + psi) - sigma;
        let mut dense = DenseSolution::default();
        let outcome = dopri5(
            rhs,
            0.0,
            sign * eps,
            t_eps,
            &OdeOptions {
                rtol: 1e-10,
                atol: 1e-12,
                ..OdeOptions::default()
            },
            &mut [],
            &mut dense,
        );
        match outcome {
            OdeOutcome::ReachedEnd { .. } => {}
            _ => panic!("offset ODE did not reach T_eps"),
        }
        // sample and test the sandwich + fit window |psi| <= eta/10
        let n = 2000;
        let mut ts = Vec::with_capacity(n + 1);
        let mut psis = Vec::with_capacity(n + 1);
        let mut sandwich_ok = true;
        let mut fit_end = t_eps;
        for i in 0..=n {
            let t = t_eps * i as f64 / n as f64;
            let psi = dense.eval(t) * sign; // fold the sign: psi > 0 branch
            ts.push(t);
            psis.push(psi);
            let envelope = eps * (rate * t).exp();
            if psi < 0.5 * envelope || psi > 2.0 * envelope {
                sandwich_ok = false;
            }
            if psi.abs() > eta / 10.0 && fit_end == t_eps {
                fit_end = t;
            }
        }
        let fit = fit_log_slope(&ts, &psis, (0.0, fit_end)).expect("offset fit");
        fitted.push(fit.rate);
        if sign > 0.0 {
            for (t, psi) in ts.iter().zip(&psis) {
                result.series.push(*t, &[("psi", *psi)]);
            }
            result.fits.push(("offset growth".into(), fit));
            result.comparisons.push(Comparison::bound(
                "sandwich eps/2 e^{rt} <= psi <= 2 eps e^{rt} on [0, T_eps]",
                if sandwich_ok { 1.0 } else { 0.0 },
                0.5,
                1.5,
            ));
            result.comparisons.push(Comparison::relative(
                "fitted growth rate vs [g(U)]_d/[U]_d",
                rate,
                fit.rate,
                0.05,
            ));
        }
    }
    result.comparisons.push(Comparison::relative(
        "opposite kick grows at the same |rate|",
        fitted[0],
        fitted[1],
        0.02,
    ));
    result.finish();
    Ok(result)
}
