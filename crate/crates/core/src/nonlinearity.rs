//! The pair (f, g): advective flux and source term with analytic derivatives.

use std::fmt;
use std::sync::Arc;

use crate::error::{CoreError, Result};
use crate::num::quad;

/// A scalar function with analytic derivatives up to some order.
///
/// Order 0 is the function itself. Implementations must be pure.
pub trait SmoothFn: Send + Sync {
    /// Highest derivative order available.
    fn max_order(&self) -> usize;
    /// Evaluate the `order`-th derivative at `u`; `order <= max_order()`.
    fn eval_deriv(&self, order: usize, u: f64) -> f64;
}

/// A [`SmoothFn`] backed by one closure per derivative order.
pub struct FnTable {
    derivs: Vec<Box<dyn Fn(f64) -> f64 + Send + Sync>>,
}

impl FnTable {
    pub fn new(derivs: Vec<Box<dyn Fn(f64) -> f64 + Send + Sync>>) -> Self {
        assert!(!derivs.is_empty());
        Self { derivs }
    }
}

impl SmoothFn for FnTable {
    fn max_order(&self) -> usize {
        self.derivs.len() - 1
    }
    fn eval_deriv(&self, order: usize, u: f64) -> f64 {
        (self.derivs[order])(u)
    }
}

/// The flux/source pair of the balance law, with its working state interval.
///
/// `f` must supply derivatives up to order 4 and `g` up to order 3; extra
/// orders, when an implementation has them, feed the characteristic-point
/// Taylor machinery.
#[derive(Clone)]
pub struct Nonlinearity {
    f: Arc<dyn SmoothFn>,
    g: Arc<dyn SmoothFn>,
    domain: (f64, f64),
    f_prime_scale: f64,
    state_scale: f64,
}

impl fmt::Debug for Nonlinearity {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        fm.debug_struct("Nonlinearity")
            .field("domain", &self.domain)
            .field("f_max_order", &self.f.max_order())
            .field("g_max_order", &self.g.max_order())
            .finish()
    }
}

const VALIDATION_SAMPLES: usize = 101;

impl Nonlinearity {
    /// Build and validate the pair. Each supplied derivative is checked
    /// against a central finite difference of the next-lower order on a
    /// 101-point sample of the domain.
    pub fn new(f: Arc<dyn SmoothFn>, g: Arc<dyn SmoothFn>, domain: (f64, f64)) -> Result<Self> {
        assert!(domain.0 < domain.1, "empty domain");
        if f.max_order() < 4 {
            return Err(CoreError::InsufficientSmoothness {
                which: "f",
                order: 4,
                max: f.max_order(),
            });
        }
        if g.max_order() < 3 {
            return Err(CoreError::InsufficientSmoothness {
                which: "g",
                order: 3,
                max: g.max_order(),
            });
        }
        let width = domain.1 - domain.0;
        let h = 1e-5 * width;
        validate_derivs(f.as_ref(), "f", 4, domain, h)?;
        validate_derivs(g.as_ref(), "g", 3, domain, h)?;

        let mut f_prime_scale = 0.0f64;
        for i in 0..=1000 {
            let u = domain.0 + width * i as f64 / 1000.0;
            f_prime_scale = f_prime_scale.max(f.eval_deriv(1, u).abs());
        }
        Ok(Self {
            f,
            g,
            domain,
            f_prime_scale: f_prime_scale.max(1e-300),
            state_scale: width,
        })
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn contains(&self, u: f64) -> bool {
        u >= self.domain.0 && u <= self.domain.1
    }

    pub fn check_domain(&self, u: f64) -> Result<()> {
        if self.contains(u) {
            Ok(())
        } else {
            Err(CoreError::OutOfDomain {
                u,
                lo: self.domain.0,
                hi: self.domain.1,
            })
        }
    }

    /// Scale of f' over the domain; tolerances for characteristic switches
    /// are relative to it.
    pub fn f_prime_scale(&self) -> f64 {
        self.f_prime_scale
    }

    /// Width of the state domain.
    pub fn state_scale(&self) -> f64 {
        self.state_scale
    }

    /// Threshold below which `|f'(u) - sigma|` counts as characteristic.
    pub fn tau_char(&self) -> f64 {
        1e-7 * self.f_prime_scale
    }

    /// Threshold below which the slope function switches to quadrature.
    pub fn tau_slope(&self) -> f64 {
        1e-6 * self.state_scale
    }

    pub fn f(&self, u: f64) -> f64 {
        self.f.eval_deriv(0, u)
    }
    pub fn f1(&self, u: f64) -> f64 {
        self.f.eval_deriv(1, u)
    }
    pub fn f2(&self, u: f64) -> f64 {
        self.f.eval_deriv(2, u)
    }
    pub fn f3(&self, u: f64) -> f64 {
        self.f.eval_deriv(3, u)
    }
    pub fn g(&self, u: f64) -> f64 {
        self.g.eval_deriv(0, u)
    }
    pub fn g1(&self, u: f64) -> f64 {
        self.g.eval_deriv(1, u)
    }
    pub fn g2(&self, u: f64) -> f64 {
        self.g.eval_deriv(2, u)
    }

    /// `f` derivative of arbitrary order, failing beyond the available order.
    pub fn f_deriv(&self, order: usize, u: f64) -> Result<f64> {
        if order > self.f.max_order() {
            return Err(CoreError::InsufficientSmoothness {
                which: "f",
                order,
                max: self.f.max_order(),
            });
        }
        Ok(self.f.eval_deriv(order, u))
    }

    /// `g` derivative of arbitrary order, failing beyond the available order.
    pub fn g_deriv(&self, order: usize, u: f64) -> Result<f64> {
        if order > self.g.max_order() {
            return Err(CoreError::InsufficientSmoothness {
                which: "g",
                order,
                max: self.g.max_order(),
            });
        }
        Ok(self.g.eval_deriv(order, u))
    }

    pub fn f_max_order(&self) -> usize {
        self.f.max_order()
    }
    pub fn g_max_order(&self) -> usize {
        self.g.max_order()
    }

    /// Replace the source term, keeping the flux and domain.
    pub fn with_source(&self, g: Arc<dyn SmoothFn>) -> Result<Self> {
        Self::new(self.f.clone(), g, self.domain)
    }

    /// The pair transformed under the symmetry `(x, f) -> (-x, -f)`.
    pub fn mirrored(&self) -> Self {
        struct Neg(Arc<dyn SmoothFn>);
        impl SmoothFn for Neg {
            fn max_order(&self) -> usize {
                self.0.max_order()
            }
            fn eval_deriv(&self, order: usize, u: f64) -> f64 {
                -self.0.eval_deriv(order, u)
            }
        }
        Self {
            f: Arc::new(Neg(self.f.clone())),
            g: self.g.clone(),
            domain: self.domain,
            f_prime_scale: self.f_prime_scale,
            state_scale: self.state_scale,
        }
    }
}

fn validate_derivs(
    fun: &dyn SmoothFn,
    which: &'static str,
    up_to: usize,
    domain: (f64, f64),
    h: f64,
) -> Result<()> {
    // scale per order, so the relative test does not blow up at zeros
    for order in 1..=up_to {
        let mut scale = 0.0f64;
        for i in 0..VALIDATION_SAMPLES {
            let u = domain.0 + (domain.1 - domain.0) * i as f64 / (VALIDATION_SAMPLES - 1) as f64;
            scale = scale.max(fun.eval_deriv(order, u).abs());
        }
        let scale = scale.max(1.0);
        for i in 0..VALIDATION_SAMPLES {
            let t = i as f64 / (VALIDATION_SAMPLES - 1) as f64;
            // keep the stencil inside the domain
            let u = (domain.0 + 2.0 * h) + (domain.1 - domain.0 - 4.0 * h) * t;
            let lower = |x: f64| fun.eval_deriv(order - 1, x);
            for v in [lower(u - h), lower(u), lower(u + h), fun.eval_deriv(order, u)] {
                if !v.is_finite() {
                    return Err(CoreError::NonFiniteEvaluation { which, at: u });
                }
            }
            // 5-point central difference of the next-lower order
            let fd = (lower(u - 2.0 * h) - 8.0 * lower(u - h) + 8.0 * lower(u + h)
                - lower(u + 2.0 * h))
                / (12.0 * h);
            let exact = fun.eval_deriv(order, u);
            let rel = (fd - exact).abs() / scale;
            if rel > 1e-6 {
                return Err(CoreError::DerivativeMismatch {
                    which,
                    order,
                    at: u,
                    rel_err: rel,
                });
            }
        }
    }
    Ok(())
}

/// Averaged flux derivative `s_f(a,b) = ∫_0^1 f'(a + τ(b-a)) dτ`.
///
/// Equal to the difference quotient `(f(b)-f(a))/(b-a)` away from the
/// diagonal; near it, evaluated by 5-point Gauss-Legendre quadrature of `f'`
/// so the result stays C^1 across the switch.
pub fn slope(nl: &Nonlinearity, a: f64, b: f64) -> f64 {
    if (b - a).abs() > nl.tau_slope() {
        (nl.f(b) - nl.f(a)) / (b - a)
    } else {
        quad::gauss5(|t| nl.f1(a + t * (b - a)), 0.0, 1.0)
    }
}

/// Averaged source derivative, same construction applied to `g`.
pub fn slope_source(nl: &Nonlinearity, a: f64, b: f64) -> f64 {
    if (b - a).abs() > nl.tau_slope() {
        (nl.g(b) - nl.g(a)) / (b - a)
    } else {
        quad::gauss5(|t| nl.g1(a + t * (b - a)), 0.0, 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn figure_pair_validates() {
        let nl = catalog::figure().unwrap();
        assert_eq!(nl.f(0.0), -1.0);
        assert!((nl.g(0.5) - 1.0).abs() < 1e-15);
        assert!((nl.f1(0.0)).abs() < 1e-15);
        assert!((nl.f2(0.0) - 49.0 / 16.0).abs() < 1e-14);
        assert!((nl.g1(0.0) - std::f64::consts::PI).abs() < 1e-14);
    }

    #[test]
    fn bad_derivative_is_rejected() {
        let f = Arc::new(FnTable::new(vec![
            Box::new(|u: f64| u * u),
            Box::new(|_| 1.0), // wrong: should be 2u
            Box::new(|_| 2.0),
            Box::new(|_| 0.0),
            Box::new(|_| 0.0),
        ]));
        let g = Arc::new(FnTable::new(vec![
            Box::new(|u: f64| -u),
            Box::new(|_| -1.0),
            Box::new(|_| 0.0),
            Box::new(|_| 0.0),
        ]));
        let err = Nonlinearity::new(f, g, (-1.0, 1.0)).unwrap_err();
        assert!(matches!(err, CoreError::DerivativeMismatch { which: "f", order: 1, .. }));
    }

    #[test]
    fn slope_examples() {
        let nl = catalog::figure().unwrap();
        // coincident arguments give f'
        assert!((slope(&nl, 0.3, 0.3) - nl.f1(0.3)).abs() < 1e-12);
        // figure value: 1 - cos(7/4)
        let s = slope(&nl, 0.0, 1.0);
        assert!((s - (1.0 - (1.75f64).cos())).abs() < 1e-13);
        // both branches agree at the same arguments near the switch
        let b = 0.2 + 1.01 * nl.tau_slope();
        let quotient = slope(&nl, 0.2, b);
        let quadrature = crate::num::quad::gauss5(|t| nl.f1(0.2 + t * (b - 0.2)), 0.0, 1.0);
        assert!((quotient - quadrature).abs() < 1e-12);
    }
}
