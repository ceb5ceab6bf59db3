//! Extension operators: half-line W^{1,inf} data extension and the source
//! extension that turns a smooth piece into part of a stable front of a
//! modified equation.

use std::sync::Arc;

use crate::error::{CoreError, Result};
use crate::nonlinearity::{Nonlinearity, SmoothFn};
use crate::num::bump;

/// Side of the real line carrying the given data.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HalfLine {
    /// data on (0, +inf), extension fills x < 0
    Right,
    /// data on (-inf, 0), extension fills x > 0
    Left,
}

/// A C^1 function on a half-line: value and derivative.
pub trait HalfLineFn {
    fn value(&self, x: f64) -> f64;
    fn deriv(&self, x: f64) -> f64;
}

impl<F, G> HalfLineFn for (F, G)
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    fn value(&self, x: f64) -> f64 {
        (self.0)(x)
    }
    fn deriv(&self, x: f64) -> f64 {
        (self.1)(x)
    }
}

/// C^1 extension of half-line data to the whole line.
///
/// The extension follows the first-order Taylor ray from the boundary,
/// cut off by a wide low-slope taper over `width`; the cutoff geometry keeps
/// `||E v||_{W^{1,inf}} <= 3 ||v||_{W^{1,inf}}`. An optional interpolation
/// constraint `(x_m, value)` inside the extended region is honored by a
/// compactly supported bump correction.
pub struct HalfLineExtension<'a> {
    data: &'a dyn HalfLineFn,
    side: HalfLine,
    width: f64,
    boundary_value: f64,
    boundary_slope: f64,
    match_bump: Option<(f64, f64, f64)>, // (x_m, coefficient, radius)
}

impl<'a> HalfLineExtension<'a> {
    pub fn new(
        data: &'a dyn HalfLineFn,
        side: HalfLine,
        match_point: Option<(f64, f64)>,
    ) -> Result<Self> {
        let boundary_value = data.value(0.0);
        let boundary_slope = data.deriv(0.0);
        let width = 2.0;
        let mut ext = Self {
            data,
            side,
            width,
            boundary_value,
            boundary_slope,
            match_bump: None,
        };
        if let Some((x_m, target)) = match_point {
            let in_extension = match side {
                HalfLine::Right => x_m < 0.0,
                HalfLine::Left => x_m > 0.0,
            };
            if !in_extension {
                return Err(CoreError::AssumptionViolated(vec![format!(
                    "match point {x_m} is on the data side"
                )]));
            }
            let base = ext.value(x_m);
            let radius = (x_m.abs() * 0.5).max(1e-3);
            ext.match_bump = Some((x_m, target - base, radius));
        }
        Ok(ext)
    }

    fn taper_arg(&self, x: f64) -> f64 {
        match self.side {
            HalfLine::Right => -x / self.width,
            HalfLine::Left => x / self.width,
        }
    }

    fn on_data_side(&self, x: f64) -> bool {
        match self.side {
            HalfLine::Right => x >= 0.0,
            HalfLine::Left => x <= 0.0,
        }
    }

    pub fn value(&self, x: f64) -> f64 {
        let mut v = if self.on_data_side(x) {
            self.data.value(x)
        } else {
            (self.boundary_value + self.boundary_slope * x) * bump::taper(self.taper_arg(x))
        };
        if let Some((x_m, coeff, r)) = self.match_bump {
            v += coeff * bump::bump((x - x_m) / r) / bump::bump(0.0);
        }
        v
    }

    pub fn deriv(&self, x: f64) -> f64 {
        let mut dv = if self.on_data_side(x) {
            self.data.deriv(x)
        } else {
            let t = self.taper_arg(x);
            let dt_dx = match self.side {
                HalfLine::Right => -1.0 / self.width,
                HalfLine::Left => 1.0 / self.width,
            };
            self.boundary_slope * bump::taper(t)
                + (self.boundary_value + self.boundary_slope * x) * bump::taper_deriv(t) * dt_dx
        };
        if let Some((x_m, coeff, r)) = self.match_bump {
            dv += coeff * bump::bump_deriv(1, (x - x_m) / r) / (r * bump::bump(0.0));
        }
        dv
    }
}

/// Extend the source `g` below `a_prime` so the extension vanishes at
/// `a_dprime` with slope `alpha < 0` while agreeing with `g` on
/// `[a_prime, top]` and staying negative on `(a_dprime, a]`.
///
/// The blend is `(1 - chi) * alpha (x - a_dprime) + chi * g(x)` with a fixed
/// C-infinity step `chi` rising across the middle third of
/// `[a_dprime, a_prime]`.
pub fn extend_nonlinearity(
    nl: &Nonlinearity,
    a_dprime: f64,
    a_prime: f64,
    a: f64,
    alpha: f64,
) -> Result<Nonlinearity> {
    if !(a_dprime < a_prime && a_prime < a) {
        return Err(CoreError::AssumptionViolated(vec![format!(
            "need a'' < a' < a, got {a_dprime}, {a_prime}, {a}"
        )]));
    }
    if alpha >= 0.0 {
        return Err(CoreError::AssumptionViolated(vec![format!(
            "extension slope must be negative, got {alpha}"
        )]));
    }
    // precondition: g negative on [a', a]
    for i in 0..=1000 {
        let u = a_prime + (a - a_prime) * i as f64 / 1000.0;
        let v = nl.g(u);
        if v >= 0.0 {
            return Err(CoreError::SignViolation {
                lo: a_prime,
                hi: a,
                at: u,
                val: v,
            });
        }
    }

    struct BlendedSource {
        inner: Nonlinearity,
        a_dprime: f64,
        alpha: f64,
        // chi rises from 0 to 1 on [t0, t0 + w]
        t0: f64,
        w: f64,
    }
    impl BlendedSource {
        fn chi(&self, order: usize, x: f64) -> f64 {
            let t = (x - self.t0) / self.w;
            match order {
                0 => bump::smoothstep(t),
                k => bump::smoothstep_deriv(k, t) / self.w.powi(k as i32),
            }
        }
    }
    impl SmoothFn for BlendedSource {
        fn max_order(&self) -> usize {
            3
        }
        fn eval_deriv(&self, order: usize, x: f64) -> f64 {
            // line L(x) = alpha (x - a''), product rule on
            // (1 - chi) L + chi g = L + chi (g - L)
            let line = |k: usize, x: f64| match k {
                0 => self.alpha * (x - self.a_dprime),
                1 => self.alpha,
                _ => 0.0,
            };
            let diff = |k: usize, x: f64| self.inner.g_deriv(k, x).unwrap_or(0.0) - line(k, x);
            const BINOM: [[f64; 4]; 4] = [
                [1.0, 0.0, 0.0, 0.0],
                [1.0, 1.0, 0.0, 0.0],
                [1.0, 2.0, 1.0, 0.0],
                [1.0, 3.0, 3.0, 1.0],
            ];
            let mut acc = line(order, x);
            for j in 0..=order {
                acc += BINOM[order][j] * self.chi(j, x) * diff(order - j, x);
            }
            acc
        }
    }

    let delta = a_prime - a_dprime;
    let blended = BlendedSource {
        inner: nl.clone(),
        a_dprime,
        alpha,
        t0: a_dprime + delta / 3.0,
        w: delta / 3.0,
    };
    let extended = nl.with_source(Arc::new(blended))?;
    // the blend must stay negative up to `a`
    for i in 1..=1000 {
        let u = a_dprime + (a - a_dprime) * i as f64 / 1000.0;
        let v = extended.g(u);
        if v >= 0.0 {
            return Err(CoreError::SignViolation {
                lo: a_dprime,
                hi: a,
                at: u,
                val: v,
            });
        }
    }
    Ok(extended)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn zero_data_extends_to_zero() {
        let data = (|_: f64| 0.0, |_: f64| 0.0);
        let ext = HalfLineExtension::new(&data, HalfLine::Right, None).unwrap();
        for i in -20..=20 {
            let x = i as f64 * 0.2;
            assert_eq!(ext.value(x), 0.0);
            assert_eq!(ext.deriv(x), 0.0);
        }
    }

    #[test]
    fn norm_ratio_within_three() {
        // bounded data with bounded slope on (0, inf)
        let data = (
            |x: f64| (1.0 + x).recip() + 0.3 * (2.0 * x).sin(),
            |x: f64| -(1.0 + x).powi(-2) + 0.6 * (2.0 * x).cos(),
        );
        let ext = HalfLineExtension::new(&data, HalfLine::Right, None).unwrap();
        let mut data_norm = 0.0f64;
        let mut ext_norm = 0.0f64;
        for i in 0..=4000 {
            let x = i as f64 * 0.005;
            data_norm = data_norm.max(data.value(x).abs()).max(data.deriv(x).abs());
            ext_norm = ext_norm
                .max(ext.value(-x).abs())
                .max(ext.deriv(-x).abs());
        }
        assert!(
            ext_norm <= 3.0 * data_norm + 1e-12,
            "ratio {}",
            ext_norm / data_norm
        );
    }

    #[test]
    fn extension_is_c1_at_the_boundary() {
        let data = (|x: f64| 0.5 * x + 1.0 - x * x, |x: f64| 0.5 - 2.0 * x);
        let ext = HalfLineExtension::new(&data, HalfLine::Right, None).unwrap();
        let h = 1e-6;
        assert!((ext.value(-h) - ext.value(0.0) + h * ext.deriv(0.0)).abs() < 1e-9);
        let fd = (ext.value(h) - ext.value(-h)) / (2.0 * h);
        assert!((fd - ext.deriv(0.0)).abs() < 1e-6);
    }

    #[test]
    fn match_point_is_honored() {
        let data = (|x: f64| (-x).exp(), |x: f64| -(-x).exp());
        let ext = HalfLineExtension::new(&data, HalfLine::Right, Some((-1.0, 0.5))).unwrap();
        assert!((ext.value(-1.0) - 0.5).abs() < 1e-12);
        // data side untouched
        assert!((ext.value(2.0) - (-2.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn source_extension_matches_g_above_a_prime() {
        let nl = catalog::figure().unwrap();
        // g = sin(pi u) is negative on [-0.5, -0.2]; extend down to -1
        let ext = extend_nonlinearity(&nl, -1.0, -0.5, -0.2, -1.0).unwrap();
        for i in 0..=100 {
            let u = -0.5 + i as f64 / 100.0 * 3.0;
            assert!(
                (ext.g(u) - nl.g(u)).abs() < 1e-14,
                "u={u}: {} vs {}",
                ext.g(u),
                nl.g(u)
            );
        }
        // vanishes with the prescribed slope at a''
        assert!(ext.g(-1.0).abs() < 1e-14);
        let h = 1e-7;
        let fd = (ext.g(-1.0 + h) - ext.g(-1.0 - h)) / (2.0 * h);
        assert!((fd + 1.0).abs() < 1e-8);
        assert!((ext.g1(-1.0) + 1.0).abs() < 1e-12);
        // strictly negative on (a'', a]
        for i in 1..=1000 {
            let u = -1.0 + i as f64 / 1000.0 * 0.8;
            assert!(ext.g(u) < 0.0, "u={u} g={}", ext.g(u));
        }
    }

    #[test]
    fn source_extension_rejects_wrong_sign() {
        let nl = catalog::figure().unwrap();
        // g = sin(pi u) is positive on [0.2, 0.8]
        let err = extend_nonlinearity(&nl, -1.0, 0.2, 0.8, -1.0).unwrap_err();
        assert!(matches!(err, CoreError::SignViolation { .. }));
    }
}
