//! Weyl-sequence quotients at infinity: oscillating bump profiles riding
//! the tail of the wave witness the essential spectrum curve
//! `g'(u_inf) + i xi`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use waves_core::num::{bump, quad};
use waves_core::{Nonlinearity, WaveProfile};

use crate::error::{Result, SpectralError};

/// Norm index: a finite exponent or the sup norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum NormIndex {
    P(f64),
    Inf,
}

impl NormIndex {
    fn recip(&self) -> f64 {
        match self {
            NormIndex::P(p) => 1.0 / p,
            NormIndex::Inf => 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct WeylOptions {
    /// spectral frequency along the essential curve
    pub xi: f64,
    /// numerator Sobolev index k of the W^{k,p} norm
    pub k: usize,
    pub p: NormIndex,
    pub q: NormIndex,
    /// additive shift applied to lambda (0 on the curve)
    pub lambda_offset: Complex64,
    /// +1: bump in the right tail; -1: left tail
    pub side: f64,
}

impl Default for WeylOptions {
    fn default() -> Self {
        Self {
            xi: 0.0,
            k: 0,
            p: NormIndex::Inf,
            q: NormIndex::Inf,
            lambda_offset: Complex64::new(0.0, 0.0),
            side: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct WeylPoint {
    pub eps: f64,
    pub quotient: f64,
}

/// The standard bump transplanted to (0, 1).
fn chi01(t: f64) -> f64 {
    bump::bump(2.0 * t - 1.0)
}

fn chi01_deriv(t: f64) -> f64 {
    2.0 * bump::bump_deriv(1, 2.0 * t - 1.0)
}

/// `||(lambda - L) w_eps||_{W^{k,p}} / ||w_eps||_{L^q}` for the tail bump
/// `w_eps(x) = exp(-i xi x/(f'(u_inf)-sigma)) chi(eps x - 1/eps)` at
/// `lambda = g'(u_inf) + i xi + offset`.
pub fn weyl_quotient(
    profile: &WaveProfile,
    nl: &Nonlinearity,
    eps: f64,
    opts: &WeylOptions,
) -> Result<f64> {
    let sigma = profile.sigma;
    let u_inf = if opts.side > 0.0 {
        profile.endstates.1
    } else {
        profile.endstates.0
    };
    let speed = nl.f1(u_inf) - sigma;
    // support of chi(eps x - 1/eps) on the chosen side
    let (s_lo, s_hi) = if opts.side > 0.0 {
        (1.0 / (eps * eps), 1.0 / (eps * eps) + 1.0 / eps)
    } else {
        (-1.0 / (eps * eps) - 1.0 / eps, -1.0 / (eps * eps))
    };
    // the bump must ride the tail, clear of jumps and characteristic points
    for d in &profile.discontinuities {
        if d.position >= s_lo && d.position <= s_hi {
            return Err(SpectralError::SupportLeak(format!(
                "discontinuity at {}",
                d.position
            )));
        }
    }
    for (x_star, _) in profile.characteristic_points() {
        if x_star >= s_lo && x_star <= s_hi {
            return Err(SpectralError::SupportLeak(format!(
                "characteristic point at {x_star}"
            )));
        }
    }
    let innermost = if opts.side > 0.0 { s_lo } else { s_hi };
    let mut frontier = f64::NEG_INFINITY;
    for d in &profile.discontinuities {
        frontier = frontier.max(opts.side * d.position);
    }
    for (x_star, _) in profile.characteristic_points() {
        frontier = frontier.max(opts.side * x_star);
    }
    if frontier.is_finite() && opts.side * innermost <= frontier {
        return Err(SpectralError::SupportLeak(
            "bump support does not sit in the tail".into(),
        ));
    }

    let lambda = Complex64::new(nl.g1(u_inf), opts.xi) + opts.lambda_offset;
    let phase_rate = -opts.xi / speed;
    let side = opts.side;
    let chi_arg = move |x: f64| eps * (side * x) - 1.0 / eps;
    // chi value/derivative in x
    let chi_x = move |x: f64| chi01(chi_arg(x));
    let dchi_x = move |x: f64| side * eps * chi01_deriv(chi_arg(x));
    let w = |x: f64| Complex64::from_polar(1.0, phase_rate * x) * chi_x(x);
    // (lambda - L) w = [lambda - g'(U) + (f'(U))'] w + (f'(U)-sigma) w'
    let residual = |x: f64| -> Complex64 {
        let u = profile.value(x);
        let du = profile.derivative(nl, x);
        let a = nl.f1(u) - sigma;
        let adv_rate = nl.f2(u) * du;
        let phase = Complex64::from_polar(1.0, phase_rate * x);
        let w_val = phase * chi_x(x);
        let w_der = phase * (Complex64::new(0.0, phase_rate) * chi_x(x) + dchi_x(x));
        (lambda - nl.g1(u) + adv_rate) * w_val + w_der * a
    };

    let numerator = match opts.k {
        0 => norm_on(&residual, s_lo, s_hi, opts.p),
        k => {
            // max over derivative orders, differentiating the residual by
            // central differences
            let mut worst = norm_on(&residual, s_lo, s_hi, opts.p);
            let h = 1e-4 / eps.max(1e-3);
            let d1 = |x: f64| (residual(x + h) - residual(x - h)) / (2.0 * h);
            worst = worst.max(norm_on(&d1, s_lo, s_hi, opts.p));
            if k >= 2 {
                let d2 = |x: f64| {
                    (residual(x + h) - residual(x) * 2.0 + residual(x - h)) / (h * h)
                };
                worst = worst.max(norm_on(&d2, s_lo, s_hi, opts.p));
            }
            worst
        }
    };
    let denominator = norm_on(&|x| w(x), s_lo, s_hi, opts.q);
    Ok(numerator / denominator)
}

fn norm_on(f: &dyn Fn(f64) -> Complex64, lo: f64, hi: f64, idx: NormIndex) -> f64 {
    match idx {
        NormIndex::Inf => {
            let n = 4000;
            (0..=n)
                .map(|i| f(lo + (hi - lo) * i as f64 / n as f64).norm())
                .fold(0.0, f64::max)
        }
        NormIndex::P(p) => {
            let v = quad::integrate(|x| f(x).norm().powf(p), lo, hi, 1e-12);
            v.powf(1.0 / p)
        }
    }
}

/// Quotients over a sweep of scales with the fitted log-log rate.
pub fn weyl_sweep(
    profile: &WaveProfile,
    nl: &Nonlinearity,
    eps_list: &[f64],
    opts: &WeylOptions,
) -> Result<(Vec<WeylPoint>, f64)> {
    let mut points = Vec::with_capacity(eps_list.len());
    for &eps in eps_list {
        points.push(WeylPoint {
            eps,
            quotient: weyl_quotient(profile, nl, eps, opts)?,
        });
    }
    // log-log slope
    let ln_e: Vec<f64> = points.iter().map(|p| p.eps.ln()).collect();
    let ln_q: Vec<f64> = points.iter().map(|p| p.quotient.ln()).collect();
    let n = ln_e.len() as f64;
    let ebar = ln_e.iter().sum::<f64>() / n;
    let qbar = ln_q.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for i in 0..ln_e.len() {
        sxx += (ln_e[i] - ebar) * (ln_e[i] - ebar);
        sxy += (ln_e[i] - ebar) * (ln_q[i] - qbar);
    }
    Ok((points, sxy / sxx))
}

/// The theoretical quotient rate `eps^(1 - 1/p + 1/q)`.
pub fn expected_rate(p: NormIndex, q: NormIndex) -> f64 {
    1.0 - p.recip() + q.recip()
}
