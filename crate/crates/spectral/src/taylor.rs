//! Truncated Taylor series (jets) and the recurrence giving the profile's
//! Taylor expansion at a characteristic point.
//!
//! At a characteristic point the profile ODE degenerates; the expansion
//! coefficients still follow from matching orders in
//! `(f'(U) - sigma) U' = g(U)`, each order being linear in the next unknown
//! coefficient with factor `n g'(u_star)`.

use waves_core::{Nonlinearity, WaveProfile};

use crate::error::{Result, SpectralError};

/// Coefficients `c[k] = h^(k)(x0)/k!` of a truncated expansion.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    pub c: Vec<f64>,
}

impl Jet {
    pub fn constant(value: f64, order: usize) -> Self {
        let mut c = vec![0.0; order + 1];
        c[0] = value;
        Self { c }
    }

    pub fn order(&self) -> usize {
        self.c.len() - 1
    }

    pub fn mul(&self, other: &Jet) -> Jet {
        let n = self.order().min(other.order());
        let mut c = vec![0.0; n + 1];
        for (k, ck) in c.iter_mut().enumerate() {
            for i in 0..=k {
                *ck += self.c[i] * other.c[k - i];
            }
        }
        Jet { c }
    }

    pub fn add(&self, other: &Jet) -> Jet {
        let n = self.order().min(other.order());
        let c = (0..=n).map(|k| self.c[k] + other.c[k]).collect();
        Jet { c }
    }

    pub fn scale(&self, s: f64) -> Jet {
        Jet {
            c: self.c.iter().map(|v| v * s).collect(),
        }
    }

    /// Derivative as a jet (one order lower).
    pub fn derivative(&self) -> Jet {
        let n = self.order();
        let c = (1..=n).map(|k| self.c[k] * k as f64).collect();
        Jet { c }
    }

    /// Append `k` zero coefficients.
    pub fn padded(&self, k: usize) -> Jet {
        let mut c = self.c.clone();
        c.extend(std::iter::repeat(0.0).take(k));
        Jet { c }
    }

    /// `k!` times the k-th coefficient: the k-th derivative value.
    pub fn deriv_value(&self, k: usize) -> f64 {
        let mut fact = 1.0;
        for j in 1..=k {
            fact *= j as f64;
        }
        self.c[k] * fact
    }

    /// Compose a smooth scalar function with this jet:
    /// `phi(J)` truncated at the jet's order; needs `phi` derivatives at
    /// `J(0)` up to that order, supplied by `phi_derivs[j] = phi^(j)(J(0))`.
    pub fn compose(&self, phi_derivs: &[f64]) -> Jet {
        let n = self.order();
        assert!(phi_derivs.len() > n);
        // delta = J - J(0); accumulate phi(c0) + sum_j phi^(j)/j! delta^j
        let mut delta = self.clone();
        delta.c[0] = 0.0;
        let mut acc = Jet::constant(phi_derivs[0], n);
        let mut power = Jet::constant(1.0, n);
        let mut fact = 1.0;
        for j in 1..=n {
            power = power.mul(&delta);
            fact *= j as f64;
            acc = acc.add(&power.scale(phi_derivs[j] / fact));
        }
        acc
    }
}

/// Expand the profile around a characteristic point `(x_star, u_star)` up to
/// `order`. Returns the U-jet in the local variable `s = x - x_star`.
pub fn profile_jet_at_characteristic(
    nl: &Nonlinearity,
    sigma: f64,
    u_star: f64,
    order: usize,
) -> Result<Jet> {
    // f' up to f^(order+1), g up to g^(order) enter the recurrence
    if nl.f_max_order() < order + 1 {
        return Err(SpectralError::InsufficientSmoothness(format!(
            "profile jet of order {order} needs f derivatives up to {}",
            order + 1
        )));
    }
    if nl.g_max_order() < order {
        return Err(SpectralError::InsufficientSmoothness(format!(
            "profile jet of order {order} needs g derivatives up to {order}"
        )));
    }
    let g1 = nl.g1(u_star);
    if g1.abs() < 1e-13 {
        return Err(SpectralError::InsufficientSmoothness(
            "g'(u_star) = 0: degenerate characteristic point".into(),
        ));
    }
    let mut u = Jet::constant(u_star, order);
    // U_1 = g'(u_star)/f''(u_star)
    if order >= 1 {
        u.c[1] = g1 / nl.f2(u_star);
    }
    for n in 2..=order {
        // the order-n coefficient of (f'(U)-sigma) U' - g(U) is linear in
        // the unknown U_n with factor n g'(u_star); evaluate the rest with
        // U_n = 0 and solve
        let u_trunc = Jet {
            c: u.c[..n].to_vec(),
        }
        .padded(1);
        let b = flux_slope_jet(nl, sigma, &u_trunc)?;
        let g = source_jet(nl, &u_trunc, 0)?;
        let res = b.mul(&u_trunc.derivative().padded(1));
        let mismatch = res.c[n] - g.c[n];
        u.c[n] = -mismatch / (n as f64 * g1);
    }
    Ok(u)
}

/// Jet of `f'(U(x_star + s)) - sigma`.
pub fn flux_slope_jet(nl: &Nonlinearity, sigma: f64, u_jet: &Jet) -> Result<Jet> {
    let n = u_jet.order();
    let u0 = u_jet.c[0];
    let mut derivs = Vec::with_capacity(n + 1);
    for j in 0..=n {
        derivs.push(nl.f_deriv(j + 1, u0)?);
    }
    let mut out = u_jet.compose(&derivs);
    out.c[0] -= sigma;
    Ok(out)
}

/// Jet of `g^{(extra)}(U(x_star + s))` (extra = 0 gives g itself, 1 gives g').
pub fn source_jet(nl: &Nonlinearity, u_jet: &Jet, extra: usize) -> Result<Jet> {
    let n = u_jet.order();
    let u0 = u_jet.c[0];
    let mut derivs = Vec::with_capacity(n + 1);
    for j in 0..=n {
        derivs.push(nl.g_deriv(j + extra, u0)?);
    }
    Ok(u_jet.compose(&derivs))
}

/// Taylor data of the two coefficient functions of the linearized operator
/// at a characteristic point: `a(x) = f'(U(x)) - sigma` and
/// `c(x) = g'(U(x))`, as derivative values (not divided by factorials).
pub struct CharacteristicExpansion {
    pub x_star: f64,
    pub u_star: f64,
    /// `a^{(m)}(x_star)` for m = 0..=order
    pub a_derivs: Vec<f64>,
    /// `c^{(m)}(x_star)` for m = 0..=order
    pub c_derivs: Vec<f64>,
}

/// Expand the operator coefficients at the profile's characteristic point.
pub fn characteristic_expansion(
    nl: &Nonlinearity,
    profile: &WaveProfile,
    which: usize,
    order: usize,
) -> Result<CharacteristicExpansion> {
    let chars = profile.characteristic_points();
    let (x_star, u_star) = *chars.get(which).ok_or_else(|| {
        SpectralError::InsufficientSmoothness(format!("no characteristic point #{which}"))
    })?;
    let u_jet = profile_jet_at_characteristic(nl, profile.sigma, u_star, order)?;
    let a_jet = flux_slope_jet(nl, profile.sigma, &u_jet)?;
    let c_jet = source_jet(nl, &u_jet, 1)?;
    Ok(CharacteristicExpansion {
        x_star,
        u_star,
        a_derivs: (0..=order).map(|m| a_jet.deriv_value(m)).collect(),
        c_derivs: (0..=order).map(|m| c_jet.deriv_value(m)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;
    use waves_core::catalog;

    #[test]
    fn jet_composition_matches_closed_form() {
        // exp(J) for J = 1 + 2s + s^2, truncated at order 3
        let j = Jet {
            c: vec![1.0, 2.0, 1.0, 0.0],
        };
        let e = 1.0f64.exp();
        let composed = j.compose(&[e, e, e, e]);
        // exp(1 + 2s + s^2) = e * exp(2s + s^2)
        // = e (1 + (2s+s^2) + (2s+s^2)^2/2 + (2s+s^2)^3/6 + ...)
        // order coefficients: 1, 2, 1+2, 2 + 8/6 ... compute: s^2: 1 + 4/2 = 3;
        // s^3: from (2s+s^2)^2/2: 2*2*1*s^3/2 = 2 s^3; from cube: 8/6 s^3
        let expect = [e, 2.0 * e, 3.0 * e, (2.0 + 8.0 / 6.0) * e];
        for (k, exp) in expect.iter().enumerate() {
            assert!(
                (composed.c[k] - exp).abs() < 1e-12,
                "k={k}: {} vs {exp}",
                composed.c[k]
            );
        }
    }

    #[test]
    fn profile_jet_matches_dense_solution() {
        let nl = catalog::figure().unwrap();
        let wave = catalog::figure_front(&nl).unwrap();
        let jet = profile_jet_at_characteristic(&nl, 0.0, 0.0, 5).unwrap();
        // U_1 = 16 pi / 49
        assert!((jet.c[1] - 16.0 * PI / 49.0).abs() < 1e-13);
        // compare against the integrated profile at small offsets
        for &s in &[-0.1, -0.05, 0.02, 0.08, 0.12] {
            let taylor: f64 = (0..=5).rev().fold(0.0, |acc, k| acc * s + jet.c[k]);
            let exact = wave.value(s);
            assert!(
                (taylor - exact).abs() < 3.0 * s.abs().powi(6),
                "s={s}: {taylor} vs {exact}"
            );
        }
    }

    #[test]
    fn expansion_base_values() {
        let nl = catalog::figure().unwrap();
        let wave = catalog::figure_front(&nl).unwrap();
        let exp = characteristic_expansion(&nl, &wave, 0, 4).unwrap();
        assert!(exp.x_star.abs() < 1e-9);
        // a(x_star) = 0, a'(x_star) = g'(u_star) = pi
        assert!(exp.a_derivs[0].abs() < 1e-12);
        assert!((exp.a_derivs[1] - PI).abs() < 1e-12);
        // c(x_star) = g'(u_star) = pi
        assert!((exp.c_derivs[0] - PI).abs() < 1e-12);
    }

    #[test]
    fn insufficient_order_is_reported() {
        let nl = catalog::figure().unwrap();
        // figure pair provides derivatives to order 8: order 9 jet needs f^(10)
        let err = profile_jet_at_characteristic(&nl, 0.0, 0.0, 9).unwrap_err();
        assert!(matches!(err, SpectralError::InsufficientSmoothness(_)));
    }
}
