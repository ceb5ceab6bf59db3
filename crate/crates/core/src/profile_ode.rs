//! The profile ODE `(f'(U) - sigma) U' = g(U)` and its integration.

use std::cell::Cell;

use crate::error::{CoreError, Result};
use crate::nonlinearity::Nonlinearity;
use crate::num::ode::{dopri5, DenseSolution, OdeOptions, OdeOutcome};
use crate::num::roots;
use crate::profile::{Monotonicity, PiecewisePoly, ProfilePiece, TailModel};

/// Right-hand side of the profile ODE:
/// `F_sigma(u) = g(u) / (f'(u) - sigma)`, continued through characteristic
/// values by `g'(u) / f''(u)` inside the switch tolerance.
pub fn vector_field(nl: &Nonlinearity, sigma: f64, u: f64) -> Result<f64> {
    nl.check_domain(u)?;
    let b = nl.f1(u) - sigma;
    if b.abs() <= nl.tau_char() {
        let f2 = nl.f2(u);
        if f2.abs() <= 1e-12 {
            return Err(CoreError::CharacteristicDegenerate {
                u,
                tau: nl.tau_char(),
            });
        }
        Ok(nl.g1(u) / f2)
    } else {
        Ok(nl.g(u) / b)
    }
}

/// Derivative of the vector field with respect to the state.
pub fn vector_field_derivative(nl: &Nonlinearity, sigma: f64, u: f64) -> Result<f64> {
    nl.check_domain(u)?;
    let b = nl.f1(u) - sigma;
    if b.abs() <= nl.tau_char() {
        let f2 = nl.f2(u);
        if f2.abs() <= 1e-12 {
            return Err(CoreError::CharacteristicDegenerate {
                u,
                tau: nl.tau_char(),
            });
        }
        // limit of (g/b)' as u approaches the characteristic value
        Ok((nl.g2(u) * f2 - nl.g1(u) * nl.f3(u)) / (2.0 * f2 * f2))
    } else {
        Ok((nl.g1(u) * b - nl.g(u) * nl.f2(u)) / (b * b))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct IntegrationOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Endstate event: fires when `|U - u_eq| < eq_tol` toward an attracting
    /// zero of g.
    pub eq_tol: f64,
    /// Optional stopping value for composite builders.
    pub stop_value: Option<f64>,
    /// Budget on the integrated x-span.
    pub max_span: f64,
    /// Step cap; keeps the dense interpolant's derivative within the
    /// profile-ODE residual budget.
    pub max_h: f64,
    pub max_steps: usize,
}

impl Default for IntegrationOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-10,
            eq_tol: 1e-8,
            stop_value: None,
            max_span: 1e4,
            max_h: 0.025,
            max_steps: 200_000,
        }
    }
}

impl IntegrationOptions {
    pub fn tight() -> Self {
        Self {
            rtol: 1e-13,
            atol: 1e-13,
            max_h: 0.02,
            ..Self::default()
        }
    }

    pub fn with_stop(mut self, value: f64) -> Self {
        self.stop_value = Some(value);
        self
    }
}

/// What terminated the integration on the moving side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StopCondition {
    /// Reached an attracting zero of g; piece extends to infinity with the
    /// recorded tail model.
    Endstate { u_inf: f64, rate: f64 },
    /// Stopped at the requested value.
    StopValue { x: f64, u: f64 },
}

/// One-directional result prior to assembly into a [`ProfilePiece`].
#[derive(Debug, Clone)]
pub struct IntegratedBranch {
    pub dense: PiecewisePoly,
    pub x0: f64,
    pub u0: f64,
    pub x_end: f64,
    pub u_end: f64,
    pub stop: StopCondition,
    pub direction: f64,
}

/// Next non-characteristic zero of g strictly beyond `u0` in direction
/// `du_sign`, within the domain.
fn next_equilibrium(nl: &Nonlinearity, sigma: f64, u0: f64, du_sign: f64) -> Option<f64> {
    let (lo, hi) = nl.domain();
    let (a, b) = if du_sign > 0.0 { (u0, hi) } else { (lo, u0) };
    if (b - a).abs() < 1e-14 {
        return None;
    }
    let offset = 1e-9 * nl.state_scale();
    let (a, b) = if du_sign > 0.0 {
        (a + offset, b)
    } else {
        (a, b - offset)
    };
    let mut zeros = roots::scan_roots(|u| nl.g(u), a, b, 4000);
    if du_sign < 0.0 {
        zeros.reverse();
    }
    zeros
        .into_iter()
        .find(|&z| (nl.f1(z) - sigma).abs() > nl.tau_char())
}

/// Integrate the profile ODE from `(x0, u0)` in the given direction.
///
/// Terminates on (a) an endstate (attracting zero of g, recorded with the
/// exponential tail rate `g'(u_inf)/(f'(u_inf)-sigma)`), (b) the optional
/// stopping value, or (c) the domain boundary, which is an error.
pub fn integrate_profile(
    nl: &Nonlinearity,
    sigma: f64,
    u0: f64,
    x0: f64,
    direction: f64,
    opts: &IntegrationOptions,
) -> Result<IntegratedBranch> {
    assert!(direction == 1.0 || direction == -1.0);
    nl.check_domain(u0)?;
    let f0 = vector_field(nl, sigma, u0)?;

    // constant branch: g vanishes at a non-characteristic value
    if f0 == 0.0 && nl.g(u0).abs() == 0.0 {
        return Ok(IntegratedBranch {
            dense: PiecewisePoly::constant(u0, x0),
            x0,
            u0,
            x_end: x0 + direction * f64::INFINITY,
            u_end: u0,
            stop: StopCondition::Endstate {
                u_inf: u0,
                rate: nl.g1(u0) / (nl.f1(u0) - sigma),
            },
            direction,
        });
    }

    let du_sign = (f0 * direction).signum();
    let u_eq = next_equilibrium(nl, sigma, u0, du_sign);
    let u_eq_refined = u_eq.map(|z| {
        roots::solve_bracketed(
            |u| nl.g(u),
            |u| nl.g1(u),
            z - 1e-4 * nl.state_scale(),
            z + 1e-4 * nl.state_scale(),
            3,
        )
        .unwrap_or(z)
    });

    let rhs_error: Cell<Option<CoreError>> = Cell::new(None);
    let rhs = |_x: f64, u: f64| -> f64 {
        match vector_field(nl, sigma, u.clamp(nl.domain().0, nl.domain().1)) {
            Ok(v) => v,
            Err(e) => {
                if rhs_error.take().is_none() {
                    rhs_error.set(Some(e));
                }
                0.0
            }
        }
    };

    let eq_tol = opts.eq_tol;
    let mut ev_eq = |_x: f64, u: f64| match u_eq_refined {
        Some(z) => (u - z).abs() - eq_tol,
        None => 1.0,
    };
    let stop_value = opts.stop_value;
    let mut ev_stop = move |_x: f64, u: f64| match stop_value {
        Some(s) => u - s,
        None => 1.0,
    };
    let (dom_lo, dom_hi) = nl.domain();
    let mut ev_domain = move |_x: f64, u: f64| (u - dom_lo).min(dom_hi - u);

    let mut dense = DenseSolution::default();
    let ode_opts = OdeOptions {
        rtol: opts.rtol,
        atol: opts.atol,
        h0: None,
        max_h: opts.max_h,
        max_steps: opts.max_steps,
    };
    let x_end = x0 + direction * opts.max_span;
    let outcome = dopri5(
        &rhs,
        x0,
        u0,
        x_end,
        &ode_opts,
        &mut [&mut ev_eq, &mut ev_stop, &mut ev_domain],
        &mut dense,
    );
    if let Some(e) = rhs_error.take() {
        return Err(e);
    }

    match outcome {
        OdeOutcome::Event { index: 0, x, u } => {
            let u_inf = u_eq_refined.unwrap();
            let rate = nl.g1(u_inf) / (nl.f1(u_inf) - sigma);
            // phase-line attraction: the tail must decay along the direction
            if rate * direction >= 0.0 {
                return Err(CoreError::StallNoEquilibrium { x, u });
            }
            Ok(IntegratedBranch {
                dense: PiecewisePoly::from_dense(&dense),
                x0,
                u0,
                x_end: x,
                u_end: u,
                stop: StopCondition::Endstate { u_inf, rate },
                direction,
            })
        }
        OdeOutcome::Event { index: 1, x, u } => {
            // polish the stop location on the value equation
            let target = opts.stop_value.unwrap();
            let poly = PiecewisePoly::from_dense(&dense);
            let x = refine_value_root(nl, sigma, &poly, x, target).unwrap_or(x);
            let _ = u;
            Ok(IntegratedBranch {
                dense: poly,
                x0,
                u0,
                x_end: x,
                u_end: target,
                stop: StopCondition::StopValue { x, u: target },
                direction,
            })
        }
        OdeOutcome::Event { index: _, x, u } => Err(CoreError::BlowUp { x, u }),
        OdeOutcome::ReachedEnd { u_end } => Err(CoreError::StallNoEquilibrium {
            x: x_end,
            u: u_end,
        }),
        OdeOutcome::StepBudget { x, u } => Err(CoreError::StallNoEquilibrium { x, u }),
    }
}

/// Newton-polish `U(x) = target` on the dense data using `U' = F_sigma(U)`.
fn refine_value_root(
    nl: &Nonlinearity,
    sigma: f64,
    poly: &PiecewisePoly,
    x_guess: f64,
    target: f64,
) -> Option<f64> {
    let mut x = x_guess;
    for _ in 0..3 {
        let u = poly.eval(x);
        let du = vector_field(nl, sigma, u).ok()?;
        if du == 0.0 {
            break;
        }
        x -= (u - target) / du;
    }
    Some(x)
}

/// Locate characteristic points (where `f'(U) = sigma`) along a branch.
pub fn characteristic_points_on(
    nl: &Nonlinearity,
    sigma: f64,
    poly: &PiecewisePoly,
) -> Vec<(f64, f64)> {
    let (lo, hi) = poly.span();
    if hi - lo <= 0.0 {
        return Vec::new();
    }
    let n = 4000;
    let mut out = Vec::new();
    let mut prev_x = lo;
    let mut prev = nl.f1(poly.eval(lo)) - sigma;
    for i in 1..=n {
        let x = lo + (hi - lo) * i as f64 / n as f64;
        let val = nl.f1(poly.eval(x)) - sigma;
        if prev == 0.0 {
            out.push(prev_x);
        } else if val != 0.0 && val.signum() != prev.signum() {
            if let Some(r) = roots::bisect(
                &|xx: f64| nl.f1(poly.eval(xx)) - sigma,
                prev_x,
                x,
                1e-14 * (1.0 + x.abs()),
            ) {
                out.push(r);
            }
        }
        prev_x = x;
        prev = val;
    }
    if prev == 0.0 {
        out.push(prev_x);
    }
    out.into_iter().map(|x| (x, poly.eval(x))).collect()
}

/// Assemble a full-line smooth piece from two branches sharing an anchor.
pub fn assemble_bidirectional_piece(
    nl: &Nonlinearity,
    sigma: f64,
    left: IntegratedBranch,
    right: IntegratedBranch,
) -> ProfilePiece {
    assert!(left.direction < 0.0 && right.direction > 0.0);
    let (tail_left, x_lo, left_limit) = branch_end(&left);
    let (tail_right, x_hi, right_limit) = branch_end(&right);
    let mono = monotonicity_of(nl, sigma, right.u0);
    let dense = PiecewisePoly::merged(left.dense, right.dense);
    let mut characteristic_points = characteristic_points_on(nl, sigma, &dense);
    characteristic_points.dedup_by(|a, b| (a.0 - b.0).abs() < 1e-9);
    ProfilePiece {
        x_lo,
        x_hi,
        constant: None,
        dense,
        left_limit,
        right_limit,
        characteristic_points,
        monotonicity: mono,
        tail_left,
        tail_right,
    }
}

/// Assemble a piece from a single branch whose anchor side is a finite
/// boundary (a jump position).
pub fn assemble_single_branch_piece(
    nl: &Nonlinearity,
    sigma: f64,
    branch: IntegratedBranch,
) -> ProfilePiece {
    let dense = branch.dense.clone();
    let mut characteristic_points = characteristic_points_on(nl, sigma, &dense);
    characteristic_points.dedup_by(|a, b| (a.0 - b.0).abs() < 1e-9);
    let mono = monotonicity_of(nl, sigma, branch.u0);
    let (tail, x_far, far_limit) = branch_end(&branch);
    let (x_lo, x_hi, left_limit, right_limit, tail_left, tail_right) = if branch.direction > 0.0 {
        (branch.x0, x_far, branch.u0, far_limit, None, tail)
    } else {
        (x_far, branch.x0, far_limit, branch.u0, tail, None)
    };
    ProfilePiece {
        x_lo,
        x_hi,
        constant: None,
        dense,
        left_limit,
        right_limit,
        characteristic_points,
        monotonicity: mono,
        tail_left,
        tail_right,
    }
}

fn branch_end(branch: &IntegratedBranch) -> (Option<TailModel>, f64, f64) {
    match branch.stop {
        StopCondition::Endstate { u_inf, rate } => (
            Some(TailModel {
                u_inf,
                rate,
                x_anchor: branch.x_end,
                u_anchor: branch.u_end,
            }),
            branch.direction * f64::INFINITY,
            u_inf,
        ),
        StopCondition::StopValue { x, u } => (None, x, u),
    }
}

fn monotonicity_of(nl: &Nonlinearity, sigma: f64, u_sample: f64) -> Monotonicity {
    match vector_field(nl, sigma, u_sample) {
        Ok(v) if v > 0.0 => Monotonicity::Increasing,
        Ok(v) if v < 0.0 => Monotonicity::Decreasing,
        _ => Monotonicity::Constant,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use std::f64::consts::PI;

    #[test]
    fn vector_field_limit_at_characteristic_value() {
        let nl = catalog::figure().unwrap();
        // limit value g'(0)/f''(0) = 16 pi / 49
        let v = vector_field(&nl, 0.0, 0.0).unwrap();
        assert!((v - 16.0 * PI / 49.0).abs() < 1e-14);
        // generic branch just off the characteristic value agrees to 1e-6
        let v_eps = vector_field(&nl, 0.0, 1e-6).unwrap();
        assert!((v - v_eps).abs() < 1e-5);
        // quotient branch away from the characteristic set
        let q = vector_field(&nl, 0.0, 0.5).unwrap();
        let expect = (PI * 0.5).sin() / (1.75 * (1.75f64 * 0.5).sin());
        assert!((q - expect).abs() < 1e-14);
    }

    #[test]
    fn vector_field_zero_off_characteristic() {
        let nl = catalog::figure().unwrap();
        // g(1)=0 and f'(1) != 0 (zero up to the rounding of sin(pi))
        let v = vector_field(&nl, 0.0, 1.0).unwrap();
        assert!(v.abs() < 1e-15);
    }

    #[test]
    fn continuity_across_switch() {
        let nl = catalog::figure().unwrap();
        // u where |f'(u)| = tau_char: f'(u) = 1.75 sin(1.75u) ~ 3.0625 u
        let u_switch = nl.tau_char() / (1.75 * 1.75);
        let inside = vector_field(&nl, 0.0, u_switch * 0.99).unwrap();
        let outside = vector_field(&nl, 0.0, u_switch * 1.01).unwrap();
        assert!((inside - outside).abs() < 1e-6);
    }

    #[test]
    fn degenerate_characteristic_is_rejected() {
        // f = u^4 has f'(0)=0 and f''(0)=0
        use crate::nonlinearity::{FnTable, Nonlinearity};
        use std::sync::Arc;
        let f = Arc::new(FnTable::new(vec![
            Box::new(|u: f64| u.powi(4)) as Box<dyn Fn(f64) -> f64 + Send + Sync>,
            Box::new(|u: f64| 4.0 * u.powi(3)),
            Box::new(|u: f64| 12.0 * u * u),
            Box::new(|u: f64| 24.0 * u),
            Box::new(|_| 24.0),
        ]));
        let g = Arc::new(FnTable::new(vec![
            Box::new(|u: f64| -u) as Box<dyn Fn(f64) -> f64 + Send + Sync>,
            Box::new(|_| -1.0),
            Box::new(|_| 0.0),
            Box::new(|_| 0.0),
        ]));
        let nl = Nonlinearity::new(f, g, (-1.0, 1.0)).unwrap();
        let err = vector_field(&nl, 0.0, 0.0).unwrap_err();
        assert!(matches!(err, CoreError::CharacteristicDegenerate { .. }));
    }

    #[test]
    fn constant_branch_for_vanishing_source() {
        use crate::nonlinearity::{FnTable, Nonlinearity};
        use std::sync::Arc;
        let f = Arc::new(FnTable::new(vec![
            Box::new(|u: f64| 0.5 * u * u) as Box<dyn Fn(f64) -> f64 + Send + Sync>,
            Box::new(|u: f64| u),
            Box::new(|_| 1.0),
            Box::new(|_| 0.0),
            Box::new(|_| 0.0),
        ]));
        let g = Arc::new(FnTable::new(vec![
            Box::new(|_: f64| 0.0) as Box<dyn Fn(f64) -> f64 + Send + Sync>,
            Box::new(|_| 0.0),
            Box::new(|_| 0.0),
            Box::new(|_| 0.0),
        ]));
        let nl = Nonlinearity::new(f, g, (-2.0, 2.0)).unwrap();
        let b = integrate_profile(&nl, 3.0, 0.7, 0.0, 1.0, &IntegrationOptions::default()).unwrap();
        assert_eq!(b.u_end, 0.7);
        assert!(matches!(b.stop, StopCondition::Endstate { .. }));
    }
}
