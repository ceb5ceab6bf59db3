//! The damping weights chi_k and their rates theta_k.
//!
//! chi_k is designed so that
//! `k (f'(U))' - (f'(U)-sigma) U''/U' + (f'(U)-sigma) chi_k >= theta_k`
//! pointwise, with `theta_k = min(k g'(u_star), -g'(u_+), -g'(u_-))`.

use waves_core::num::fit::fit_log_slope;
use waves_core::profile_ode::vector_field_derivative;
use waves_core::{Nonlinearity, WaveProfile};

use crate::error::{Result, SpectralError};

/// The weight function with its rate and a cached cumulative integral.
#[derive(Debug, Clone)]
pub struct ChiWeight {
    pub k: usize,
    pub theta_k: f64,
    /// minimum of the designed inequality margin over the verification grid
    pub min_margin: f64,
    /// fitted tail decay rate of |chi_k| (negative; confirms integrability)
    pub tail_rate: f64,
    nl: Nonlinearity,
    profile: WaveProfile,
    table_x: Vec<f64>,
    table_cum: Vec<f64>,
}

/// `(f'(U))'(x) = f''(U) U'` via the profile ODE.
fn advection_rate(nl: &Nonlinearity, profile: &WaveProfile, x: f64) -> f64 {
    let u = profile.value(x);
    nl.f2(u) * profile.derivative(nl, x)
}

/// `U''/U' (x) = F_sigma'(U(x))`.
fn log_slope_rate(nl: &Nonlinearity, profile: &WaveProfile, x: f64) -> f64 {
    vector_field_derivative(nl, profile.sigma, profile.value(x)).unwrap_or(0.0)
}

fn chi_value(nl: &Nonlinearity, profile: &WaveProfile, theta_k: f64, k: usize, x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let sigma = profile.sigma;
    let a = nl.f1(profile.value(x)) - sigma;
    let raw = (theta_k - k as f64 * advection_rate(nl, profile, x) + a * log_slope_rate(nl, profile, x)) / a;
    if x > 0.0 {
        raw.max(0.0)
    } else {
        raw.min(0.0)
    }
}

/// Construct chi_k for a continuous front and verify the designed
/// inequality on a 10^4-point grid.
pub fn weight_chi(profile: &WaveProfile, nl: &Nonlinearity, k: usize) -> Result<ChiWeight> {
    if !profile.discontinuities.is_empty() || profile.characteristic_points().len() != 1 {
        return Err(SpectralError::InsufficientSmoothness(
            "chi_k weights are defined for continuous fronts".into(),
        ));
    }
    let (u_minus, u_plus) = profile.endstates;
    let (_, u_star) = profile.characteristic_points()[0];
    let theta_k = (k as f64 * nl.g1(u_star))
        .min(-nl.g1(u_plus))
        .min(-nl.g1(u_minus));

    // verification of the design inequality
    let span = 25.0;
    let n = 10_000;
    let mut min_margin = f64::INFINITY;
    for i in 0..=n {
        let x = -span + 2.0 * span * i as f64 / n as f64;
        let a = nl.f1(profile.value(x)) - profile.sigma;
        let lhs = k as f64 * advection_rate(nl, profile, x)
            - a * log_slope_rate(nl, profile, x)
            + a * chi_value(nl, profile, theta_k, k, x);
        min_margin = min_margin.min(lhs - theta_k);
    }

    // integrability: fit the tail decay of |chi_k|
    let xs: Vec<f64> = (0..=100).map(|i| 4.0 + 6.0 * i as f64 / 100.0).collect();
    let ys: Vec<f64> = xs
        .iter()
        .map(|&x| chi_value(nl, profile, theta_k, k, x).abs().max(1e-300))
        .collect();
    let tail_rate = fit_log_slope(&xs, &ys, (4.0, 10.0)).map(|f| f.rate).unwrap_or(0.0);

    // cumulative integral table (composite Simpson on a fine grid)
    let m = 16_000usize;
    let h = 2.0 * span / m as f64;
    let mut table_x = Vec::with_capacity(m + 1);
    let mut vals = Vec::with_capacity(m + 1);
    for i in 0..=m {
        let x = -span + i as f64 * h;
        table_x.push(x);
        vals.push(chi_value(nl, profile, theta_k, k, x));
    }
    let mut cum_raw = vec![0.0f64; m + 1];
    for i in 1..=m {
        cum_raw[i] = cum_raw[i - 1] + 0.5 * h * (vals[i - 1] + vals[i]);
    }
    // re-anchor at x = 0
    let zero_idx = (m as f64 * 0.5).round() as usize;
    let at_zero = cum_raw[zero_idx];
    let table_cum = cum_raw.into_iter().map(|v| v - at_zero).collect();

    Ok(ChiWeight {
        k,
        theta_k,
        min_margin,
        tail_rate,
        nl: nl.clone(),
        profile: profile.clone(),
        table_x,
        table_cum,
    })
}

impl ChiWeight {
    pub fn eval(&self, x: f64) -> f64 {
        chi_value(&self.nl, &self.profile, self.theta_k, self.k, x)
    }

    /// `∫_0^x chi_k`, from the cached table (the weight vanishes outside).
    pub fn cumulative(&self, x: f64) -> f64 {
        let (lo, hi) = (self.table_x[0], *self.table_x.last().unwrap());
        if x <= lo {
            return self.table_cum[0];
        }
        if x >= hi {
            return *self.table_cum.last().unwrap();
        }
        let h = self.table_x[1] - self.table_x[0];
        let idx = ((x - lo) / h).floor() as usize;
        let idx = idx.min(self.table_x.len() - 2);
        let t = (x - self.table_x[idx]) / h;
        self.table_cum[idx] * (1.0 - t) + self.table_cum[idx + 1] * t
    }

    /// Weight `exp(-∫_0^x chi_k)`.
    pub fn weight(&self, x: f64) -> f64 {
        (-self.cumulative(x)).exp()
    }

    /// `theta_{a,k} = inf(k a' - a U''/U' + a chi_k)` for a perturbed
    /// coefficient `a` given with its derivative.
    pub fn theta_a_k(&self, a: &dyn Fn(f64) -> f64, da: &dyn Fn(f64) -> f64) -> f64 {
        let mut inf = f64::INFINITY;
        let n = 10_000;
        let span = 25.0;
        for i in 0..=n {
            let x = -span + 2.0 * span * i as f64 / n as f64;
            let val = self.k as f64 * da(x) - a(x) * log_slope_rate(&self.nl, &self.profile, x)
                + a(x) * self.eval(x);
            inf = inf.min(val);
        }
        inf
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;
    use waves_core::catalog;

    #[test]
    fn theta_table_and_margin() {
        let nl = catalog::figure().unwrap();
        let wave = catalog::figure_front(&nl).unwrap();
        for k in 0..=3 {
            let chi = weight_chi(&wave, &nl, k).unwrap();
            let expect = (k as f64 * PI).min(PI);
            assert!((chi.theta_k - expect).abs() < 1e-9, "theta_{k}");
            assert!(chi.min_margin >= -1e-10, "margin {}", chi.min_margin);
            assert_eq!(chi.eval(0.0), 0.0);
        }
    }

    #[test]
    fn chi_is_integrable() {
        let nl = catalog::figure().unwrap();
        let wave = catalog::figure_front(&nl).unwrap();
        let chi = weight_chi(&wave, &nl, 1).unwrap();
        // exponential tail decay
        assert!(chi.tail_rate < -0.5, "tail rate {}", chi.tail_rate);
        // cumulative saturates
        let c20 = chi.cumulative(20.0);
        let c24 = chi.cumulative(24.0);
        assert!((c24 - c20).abs() < 1e-4);
    }

    #[test]
    fn perturbed_theta_degrades_linearly() {
        let nl = catalog::figure().unwrap();
        let wave = catalog::figure_front(&nl).unwrap();
        let chi = weight_chi(&wave, &nl, 1).unwrap();
        let base_a = |x: f64| nl.f1(wave.value(x));
        let base_da = |x: f64| nl.f2(wave.value(x)) * wave.derivative(&nl, x);
        let exact = chi.theta_a_k(&base_a, &base_da);
        assert!(exact >= chi.theta_k - 1e-8);
        // bump perturbation of size delta
        let delta = 0.01;
        let a = |x: f64| base_a(x) + delta * waves_core::num::bump::bump(x / 3.0);
        let da = |x: f64| base_da(x) + delta / 3.0 * waves_core::num::bump::bump_deriv(1, x / 3.0);
        let perturbed = chi.theta_a_k(&a, &da);
        let c0 = (chi.theta_k - perturbed).max(0.0) / ((1.0 + chi.k as f64) * delta);
        assert!(c0 < 50.0, "C0 = {c0}");
        assert!(perturbed >= chi.theta_k - 50.0 * (1.0 + chi.k as f64) * delta);
    }
}
