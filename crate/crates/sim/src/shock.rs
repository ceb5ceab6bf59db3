//! Tracked shocks: position, traces, admissibility margins, history.

use serde::{Deserialize, Serialize};
use waves_core::Nonlinearity;

use crate::field::{CharStatus, Characteristic};

/// One recorded point along a shock trajectory.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ShockSample {
    pub t: f64,
    pub phi: f64,
    pub phi_dot: f64,
    pub u_l: f64,
    pub u_r: f64,
    /// one-sided solution slopes at the shock
    pub slope_l: f64,
    pub slope_r: f64,
    /// `f'(u_l) - phi'`
    pub lax_left: f64,
    /// `phi' - f'(u_r)`
    pub lax_right: f64,
    /// `|f(u_r) - f(u_l) - phi' (u_r - u_l)|`
    pub rh_residual: f64,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ShockCurve {
    pub samples: Vec<ShockSample>,
}

#[derive(Debug, Clone)]
pub struct TrackedShock {
    pub pos: f64,
    pub u_left: f64,
    pub u_right: f64,
    /// one-sided slopes from the latest trace interpolation
    pub slope_left: f64,
    pub slope_right: f64,
    pub alive: bool,
    pub history: ShockCurve,
}

impl TrackedShock {
    pub fn new(pos: f64, u_left: f64, u_right: f64) -> Self {
        Self {
            pos,
            u_left,
            u_right,
            slope_left: 0.0,
            slope_right: 0.0,
            alive: true,
            history: ShockCurve::default(),
        }
    }

    pub fn speed(&self, nl: &Nonlinearity) -> f64 {
        waves_core::slope(nl, self.u_left, self.u_right)
    }

    pub fn lax_margins(&self, nl: &Nonlinearity) -> (f64, f64) {
        let s = self.speed(nl);
        (nl.f1(self.u_left) - s, s - nl.f1(self.u_right))
    }

    pub fn record(&mut self, t: f64, nl: &Nonlinearity) {
        let phi_dot = self.speed(nl);
        let (ll, lr) = self.lax_margins(nl);
        let rh = (nl.f(self.u_right) - nl.f(self.u_left) - phi_dot * (self.u_right - self.u_left))
            .abs();
        self.history.samples.push(ShockSample {
            t,
            phi: self.pos,
            phi_dot,
            u_l: self.u_left,
            u_r: self.u_right,
            slope_l: self.slope_left,
            slope_r: self.slope_right,
            lax_left: ll,
            lax_right: lr,
            rh_residual: rh,
        });
    }
}

/// Interpolated trace (value, slope du/dx) at position `x` from the 4
/// nearest active same-side characteristics.
pub fn trace_from_region(chars: &[Characteristic], x: f64, from_left: bool) -> Option<(f64, f64)> {
    let mut idx: Vec<usize> = Vec::with_capacity(4);
    if from_left {
        for (i, c) in chars.iter().enumerate().rev() {
            if c.status == CharStatus::Active && c.pos <= x {
                idx.push(i);
                if idx.len() == 4 {
                    break;
                }
            }
        }
        idx.reverse();
    } else {
        for (i, c) in chars.iter().enumerate() {
            if c.status == CharStatus::Active && c.pos >= x {
                idx.push(i);
                if idx.len() == 4 {
                    break;
                }
            }
        }
    }
    if idx.is_empty() {
        return None;
    }
    if idx.len() < 4 {
        let c = &chars[idx[if from_left { idx.len() - 1 } else { 0 }]];
        return Some((c.val, c.slope()));
    }
    let xs = [
        chars[idx[0]].pos,
        chars[idx[1]].pos,
        chars[idx[2]].pos,
        chars[idx[3]].pos,
    ];
    let vs = [
        chars[idx[0]].val,
        chars[idx[1]].val,
        chars[idx[2]].val,
        chars[idx[3]].val,
    ];
    let ss = [
        chars[idx[0]].slope(),
        chars[idx[1]].slope(),
        chars[idx[2]].slope(),
        chars[idx[3]].slope(),
    ];
    let v = crate::interp::lagrange4(&xs, &vs, x);
    let s = crate::interp::lagrange4(&xs, &ss, x);
    Some((v, s))
}
