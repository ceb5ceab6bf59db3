//! The standard C-infinity bump `exp(-1/(1-s^2))` on (-1, 1), its
//! derivatives, its normalized cumulative (a smooth step) and a wide
//! low-slope C^1 taper. One bump profile serves every extension and weight
//! in the workspace.

use std::sync::OnceLock;

use super::quad;

/// `exp(-1/(1-s^2))` for |s| < 1, zero outside.
pub fn bump(s: f64) -> f64 {
    if s.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - s * s)).exp()
    }
}

/// k-th derivative of [`bump`], 0 <= k <= 4.
pub fn bump_deriv(k: usize, s: f64) -> f64 {
    if s.abs() >= 1.0 {
        return 0.0;
    }
    let p = 1.0 - s * s;
    let b = (-1.0 / p).exp();
    let w1 = -2.0 * s / (p * p);
    match k {
        0 => b,
        1 => b * w1,
        2 => {
            let w2 = -2.0 / (p * p) - 8.0 * s * s / (p * p * p);
            b * (w2 + w1 * w1)
        }
        3 => {
            let w2 = -2.0 / (p * p) - 8.0 * s * s / (p * p * p);
            let w3 = -24.0 * s / (p * p * p) - 48.0 * s.powi(3) / p.powi(4);
            b * (w3 + 3.0 * w1 * w2 + w1.powi(3))
        }
        4 => {
            let w2 = -2.0 / (p * p) - 8.0 * s * s / (p * p * p);
            let w3 = -24.0 * s / (p * p * p) - 48.0 * s.powi(3) / p.powi(4);
            let w4 = -24.0 / p.powi(3) - 288.0 * s * s / p.powi(4) - 384.0 * s.powi(4) / p.powi(5);
            b * (w4 + 4.0 * w1 * w3 + 3.0 * w2 * w2 + 6.0 * w1 * w1 * w2 + w1.powi(4))
        }
        _ => unimplemented!("bump derivative order {k}"),
    }
}

/// `∫_{-1}^{1} bump = 0.443994...`, computed once.
pub fn bump_mass() -> f64 {
    static MASS: OnceLock<f64> = OnceLock::new();
    *MASS.get_or_init(|| quad::integrate(bump, -1.0, 1.0, 1e-14))
}

/// C-infinity monotone step: 0 for t <= 0, 1 for t >= 1.
pub fn smoothstep(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        quad::integrate(bump, -1.0, 2.0 * t - 1.0, 1e-13) / bump_mass()
    }
}

/// k-th derivative of [`smoothstep`], 1 <= k <= 4.
pub fn smoothstep_deriv(k: usize, t: f64) -> f64 {
    assert!(k >= 1);
    if !(0.0..=1.0).contains(&t) {
        return 0.0;
    }
    2.0f64.powi(k as i32) * bump_deriv(k - 1, 2.0 * t - 1.0) / bump_mass()
}

/// C^1 taper from 1 at t=0 to 0 at t=1 with `sup |rho'| = 1/0.9`.
///
/// Built from a trapezoidal slope profile; the low slope bound is what keeps
/// the half-line extension operator within its stated norm constant.
pub fn taper(t: f64) -> f64 {
    const DELTA: f64 = 0.1;
    const MASS: f64 = 1.0 - DELTA;
    if t <= 0.0 {
        return 1.0;
    }
    if t >= 1.0 {
        return 0.0;
    }
    let integral = if t < DELTA {
        t * t / (2.0 * DELTA)
    } else if t <= 1.0 - DELTA {
        DELTA / 2.0 + (t - DELTA)
    } else {
        MASS - (1.0 - t) * (1.0 - t) / (2.0 * DELTA)
    };
    1.0 - integral / MASS
}

/// Derivative of [`taper`].
pub fn taper_deriv(t: f64) -> f64 {
    const DELTA: f64 = 0.1;
    const MASS: f64 = 1.0 - DELTA;
    if !(0.0..=1.0).contains(&t) {
        return 0.0;
    }
    let phi = if t < DELTA {
        t / DELTA
    } else if t <= 1.0 - DELTA {
        1.0
    } else {
        (1.0 - t) / DELTA
    };
    -phi / MASS
}
