//! Named nonlinearity pairs and wave fixtures used across the workspace and
//! exposed through the command line.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::builders::{
    build_composite, build_constant, build_front, build_front_raw, build_glued_front_pair,
    build_riemann, build_two_char_wave, CompositeKind, CompositeSpec,
};
use crate::error::{CoreError, Result};
use crate::nonlinearity::{Nonlinearity, SmoothFn};
use crate::profile::WaveProfile;
use crate::profile_ode::IntegrationOptions;

/// `amp * trig(freq * u + phase cycle)` with derivatives of any order up to 8.
struct Sinusoid {
    amp: f64,
    freq: f64,
    /// true: sin base, false: cos base
    sin_base: bool,
}

impl SmoothFn for Sinusoid {
    fn max_order(&self) -> usize {
        8
    }
    fn eval_deriv(&self, order: usize, u: f64) -> f64 {
        let a = self.amp * self.freq.powi(order as i32);
        let x = self.freq * u;
        let phase = if self.sin_base { order } else { order + 1 } % 4;
        // sin cycle: sin, cos, -sin, -cos ; cos = sin shifted by one
        let base = match phase {
            0 => x.sin(),
            1 => x.cos(),
            2 => -x.sin(),
            _ => -x.cos(),
        };
        a * base
    }
}

/// Polynomial with exact derivatives of any order.
struct Polynomial {
    /// coefficients, lowest degree first
    coeffs: Vec<f64>,
}

impl SmoothFn for Polynomial {
    fn max_order(&self) -> usize {
        8
    }
    fn eval_deriv(&self, order: usize, u: f64) -> f64 {
        if order >= self.coeffs.len() {
            return 0.0;
        }
        let mut acc = 0.0;
        for k in (order..self.coeffs.len()).rev() {
            let mut fall = 1.0;
            for j in 0..order {
                fall *= (k - j) as f64;
            }
            acc = acc * u + self.coeffs[k] * fall;
        }
        acc
    }
}

fn cos_flux(amp: f64, freq: f64) -> Arc<dyn SmoothFn> {
    // amp * cos(freq u) = amp * sin(freq u + pi/2): use the cos cycle
    Arc::new(Sinusoid {
        amp,
        freq,
        sin_base: false,
    })
}

fn sin_source(amp: f64, freq: f64) -> Arc<dyn SmoothFn> {
    Arc::new(Sinusoid {
        amp,
        freq,
        sin_base: true,
    })
}

/// The figure pair `f(u) = -cos(7u/4)`, `g(u) = sin(pi u)` on `[-4, 4]`.
pub fn figure() -> Result<Nonlinearity> {
    figure_scaled(1.0, 1.0)
}

/// The figure pair with flux and source amplitudes scaled.
pub fn figure_scaled(flux_amp: f64, source_amp: f64) -> Result<Nonlinearity> {
    Nonlinearity::new(
        cos_flux(-flux_amp, 1.75),
        sin_source(source_amp, PI),
        (-4.0, 4.0),
    )
}

/// The wave-breaking pair: figure flux with the source negated, so the
/// characteristic value 0 damps (`g'(0) = -pi`).
pub fn breaking() -> Result<Nonlinearity> {
    Nonlinearity::new(cos_flux(-1.0, 1.75), sin_source(-1.0, PI), (-4.0, 4.0))
}

/// Quartic flux `f(u) = u^2 (u-2)^2 / 4` with `g(u) = sin(pi u)`: the
/// characteristic values 0 and 2 share the speed 0, so waves through both
/// exist and come in families.
pub fn quartic_pair() -> Result<Nonlinearity> {
    // u^2 - u^3 + u^4/4
    Nonlinearity::new(
        Arc::new(Polynomial {
            coeffs: vec![0.0, 0.0, 1.0, -1.0, 0.25],
        }),
        sin_source(1.0, PI),
        (-2.0, 4.0),
    )
}

/// Resolve a named catalog pair.
pub fn nonlinearity_by_name(name: &str) -> Result<Nonlinearity> {
    match name {
        "figure" => figure(),
        "breaking" => breaking(),
        "quartic" => quartic_pair(),
        other => Err(CoreError::AssumptionViolated(vec![format!(
            "unknown catalog pair '{other}' (have: figure, breaking, quartic)"
        )])),
    }
}

/// The stable continuous front of the figure pair: `sigma = 0`,
/// characteristic point at 0, endstates -1 and +1.
pub fn figure_front(nl: &Nonlinearity) -> Result<WaveProfile> {
    build_front(nl, -1.0, 0.0, 1.0)
}

/// Same front integrated with tightened tolerances, for experiments that
/// resolve exponentially small deviations.
pub fn figure_front_tight(nl: &Nonlinearity) -> Result<WaveProfile> {
    build_front(nl, -1.0, 0.0, 1.0)?; // run the assumption checks
    build_front_raw(nl, 0.0, &IntegrationOptions::tight())
}

/// The wave-breaking front (breaking pair): decreasing from +1 to -1 with a
/// damping characteristic value at 0.
pub fn breaking_front(nl: &Nonlinearity) -> Result<WaveProfile> {
    build_front_raw(nl, 0.0, &IntegrationOptions::default())
}

/// The figure Riemann shock between -1 and +1 (speed 0, decreasing).
pub fn figure_riemann(nl: &Nonlinearity) -> Result<WaveProfile> {
    build_riemann(nl, -1.0, 1.0)
}

/// Constant stable wave at `u = -1` in a frame of speed 1.
pub fn figure_constant(nl: &Nonlinearity) -> Result<WaveProfile> {
    build_constant(nl, -1.0, 1.0)
}

/// Constant wave at the amplifying equilibrium `u = 0` (frame speed -1);
/// the fixture for instability at infinity.
pub fn unstable_constant(nl: &Nonlinearity) -> Result<WaveProfile> {
    build_constant(nl, 0.0, -1.0)
}

/// Single-jump composite, constant on the left: anchors (-3, 0, 1).
pub fn figure_single_left(nl: &Nonlinearity) -> Result<WaveProfile> {
    build_composite(
        nl,
        &CompositeSpec {
            kind: CompositeKind::SingleLeft,
            u_minus_inf: -3.0,
            u_star: 0.0,
            u_plus_inf: 1.0,
        },
    )
}

/// Single-jump composite, constant on the right: anchors (-1, 0, 3).
pub fn figure_single_right(nl: &Nonlinearity) -> Result<WaveProfile> {
    build_composite(
        nl,
        &CompositeSpec {
            kind: CompositeKind::SingleRight,
            u_minus_inf: -1.0,
            u_star: 0.0,
            u_plus_inf: 3.0,
        },
    )
}

/// Double-jump composite: anchors (-3, 0, 3).
pub fn figure_double(nl: &Nonlinearity) -> Result<WaveProfile> {
    build_composite(
        nl,
        &CompositeSpec {
            kind: CompositeKind::Double,
            u_minus_inf: -3.0,
            u_star: 0.0,
            u_plus_inf: 3.0,
        },
    )
}

/// Glued pair of figure fronts with an amplifying jump at 0; `level` is the
/// left trace (default 0.5 gives jump eigenvalue 2).
pub fn figure_glued_pair(nl: &Nonlinearity, level: f64) -> Result<WaveProfile> {
    build_glued_front_pair(nl, 0.0, level)
}

/// Two-characteristic-point wave of the quartic pair; `level` is the left
/// jump trace in (0, 1).
pub fn quartic_family_wave(nl: &Nonlinearity, level: f64) -> Result<WaveProfile> {
    build_two_char_wave(nl, 0.0, 2.0, level)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sinusoid_derivatives() {
        let nl = figure().unwrap();
        // f = -cos(1.75 u): f' = 1.75 sin(1.75 u)
        assert!((nl.f1(1.0) - 1.75 * (1.75f64).sin()).abs() < 1e-14);
        assert!((nl.f2(1.0) - 1.75 * 1.75 * (1.75f64).cos()).abs() < 1e-14);
        // g = sin(pi u)
        assert!((nl.g1(1.0) + PI).abs() < 1e-13);
        assert!(nl.g(2.0).abs() < 1e-12);
    }

    #[test]
    fn polynomial_derivatives() {
        let nl = quartic_pair().unwrap();
        // f = u^2 (u-2)^2/4
        let f = |u: f64| (u * (u - 2.0) / 2.0).powi(2);
        for &u in &[-0.5, 0.0, 0.7, 1.9, 3.0] {
            assert!((nl.f(u) - f(u)).abs() < 1e-12);
        }
        assert_eq!(nl.f1(0.0), 0.0);
        assert_eq!(nl.f1(2.0), 0.0);
        assert_eq!(nl.f2(0.0), 2.0);
        assert_eq!(nl.f2(2.0), 2.0);
        assert_eq!(nl.f1(3.0), 6.0);
        assert_eq!(nl.f1(-1.0), -6.0);
    }
}
