//! Wave profiles: smooth monotone pieces with dense polynomial data,
//! exponential tail models, jump records, and admissibility residuals.

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::nonlinearity::Nonlinearity;
use crate::num::ode::DenseSolution;
use crate::profile_ode::vector_field;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Monotonicity {
    Increasing,
    Decreasing,
    Constant,
}

/// Exponential approach to an endstate beyond the integrated window:
/// `U(x) = u_inf + (u_anchor - u_inf) exp(rate (x - x_anchor))`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TailModel {
    pub u_inf: f64,
    pub rate: f64,
    pub x_anchor: f64,
    pub u_anchor: f64,
}

impl TailModel {
    pub fn eval(&self, x: f64) -> f64 {
        self.u_inf + (self.u_anchor - self.u_inf) * (self.rate * (x - self.x_anchor)).exp()
    }
}

/// Piecewise quartic in a local variable `s ∈ [0,1]` per interval, the
/// normalized form of the integrator's dense output.
#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq)]
pub struct PiecewisePoly {
    /// Ascending interval boundaries, length = number of intervals + 1.
    pub breakpoints: Vec<f64>,
    /// Power-basis coefficients `[c0..c4]` per interval.
    pub coeffs: Vec<[f64; 5]>,
}

impl PiecewisePoly {
    pub fn span(&self) -> (f64, f64) {
        (
            *self.breakpoints.first().unwrap(),
            *self.breakpoints.last().unwrap(),
        )
    }

    fn locate(&self, x: f64) -> usize {
        let n = self.coeffs.len();
        match self
            .breakpoints
            .binary_search_by(|b| b.partial_cmp(&x).unwrap())
        {
            Ok(i) => i.min(n - 1),
            Err(i) => i.saturating_sub(1).min(n - 1),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let i = self.locate(x);
        let (lo, hi) = (self.breakpoints[i], self.breakpoints[i + 1]);
        let s = ((x - lo) / (hi - lo)).clamp(0.0, 1.0);
        let c = &self.coeffs[i];
        (((c[4] * s + c[3]) * s + c[2]) * s + c[1]) * s + c[0]
    }

    pub fn eval_deriv(&self, x: f64) -> f64 {
        let i = self.locate(x);
        let (lo, hi) = (self.breakpoints[i], self.breakpoints[i + 1]);
        let s = ((x - lo) / (hi - lo)).clamp(0.0, 1.0);
        let c = &self.coeffs[i];
        (((4.0 * c[4] * s + 3.0 * c[3]) * s + 2.0 * c[2]) * s + c[1]) / (hi - lo)
    }

    /// Normalize raw dense-output steps (possibly integrated right-to-left)
    /// into ascending power-basis intervals.
    pub fn from_dense(sol: &DenseSolution) -> Self {
        let mut segs: Vec<(f64, f64, [f64; 5])> = Vec::with_capacity(sol.steps.len());
        for st in &sol.steps {
            let [r1, r2, r3, r4, r5] = st.rcont;
            // nested form expanded to powers of theta
            let p = [r1, r2 + r3, r4 + r5 - r3, -r4 - 2.0 * r5, r5];
            if st.h >= 0.0 {
                segs.push((st.x, st.x + st.h, p));
            } else {
                segs.push((st.x + st.h, st.x, reflect_quartic(&p)));
            }
        }
        segs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let mut breakpoints = Vec::with_capacity(segs.len() + 1);
        let mut coeffs = Vec::with_capacity(segs.len());
        for (i, (lo, hi, p)) in segs.iter().enumerate() {
            if i == 0 {
                breakpoints.push(*lo);
            }
            breakpoints.push(*hi);
            coeffs.push(*p);
        }
        Self {
            breakpoints,
            coeffs,
        }
    }

    /// Merge two adjacent representations (for pieces integrated in both
    /// directions from an anchor).
    pub fn merged(a: Self, b: Self) -> Self {
        let (first, second) = if a.span().0 <= b.span().0 { (a, b) } else { (b, a) };
        let mut breakpoints = first.breakpoints;
        let mut coeffs = first.coeffs;
        breakpoints.extend_from_slice(&second.breakpoints[1..]);
        coeffs.extend_from_slice(&second.coeffs);
        Self {
            breakpoints,
            coeffs,
        }
    }

    pub fn constant(value: f64, x0: f64) -> Self {
        Self {
            breakpoints: vec![x0, x0],
            coeffs: vec![[value, 0.0, 0.0, 0.0, 0.0]],
        }
    }

    /// Shift in x by `delta`.
    pub fn translated(&self, delta: f64) -> Self {
        Self {
            breakpoints: self.breakpoints.iter().map(|b| b + delta).collect(),
            coeffs: self.coeffs.clone(),
        }
    }
}

/// Substitute `theta -> 1 - s` in a quartic given in the power basis.
fn reflect_quartic(p: &[f64; 5]) -> [f64; 5] {
    // (1-s)^k expansions accumulated per degree
    let mut out = [0.0f64; 5];
    let binom = [
        [1.0, 0.0, 0.0, 0.0, 0.0],
        [1.0, -1.0, 0.0, 0.0, 0.0],
        [1.0, -2.0, 1.0, 0.0, 0.0],
        [1.0, -3.0, 3.0, -1.0, 0.0],
        [1.0, -4.0, 6.0, -4.0, 1.0],
    ];
    for (k, pk) in p.iter().enumerate() {
        for j in 0..=k {
            out[j] += pk * binom[k][j];
        }
    }
    out
}

/// A maximal smooth piece of the profile.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProfilePiece {
    /// Covered interval; infinities mark unbounded sides.
    pub x_lo: f64,
    pub x_hi: f64,
    /// `Some(value)` for constant pieces (dense data degenerate).
    pub constant: Option<f64>,
    pub dense: PiecewisePoly,
    pub left_limit: f64,
    pub right_limit: f64,
    /// Sorted `(x_star, u_star)` with `f'(u_star) = sigma`.
    pub characteristic_points: Vec<(f64, f64)>,
    pub monotonicity: Monotonicity,
    pub tail_left: Option<TailModel>,
    pub tail_right: Option<TailModel>,
}

impl ProfilePiece {
    pub fn contains(&self, x: f64) -> bool {
        x >= self.x_lo && x <= self.x_hi
    }

    pub fn value(&self, x: f64) -> f64 {
        if let Some(v) = self.constant {
            return v;
        }
        let (w_lo, w_hi) = self.dense.span();
        if x < w_lo {
            if let Some(t) = &self.tail_left {
                return t.eval(x);
            }
        }
        if x > w_hi {
            if let Some(t) = &self.tail_right {
                return t.eval(x);
            }
        }
        self.dense.eval(x)
    }

    /// Derivative of the stored dense representation (tails included).
    pub fn dense_derivative(&self, x: f64) -> f64 {
        if self.constant.is_some() {
            return 0.0;
        }
        let (w_lo, w_hi) = self.dense.span();
        if x < w_lo {
            if let Some(t) = &self.tail_left {
                return t.rate * (t.eval(x) - t.u_inf);
            }
        }
        if x > w_hi {
            if let Some(t) = &self.tail_right {
                return t.rate * (t.eval(x) - t.u_inf);
            }
        }
        self.dense.eval_deriv(x)
    }

    pub fn translated(&self, delta: f64) -> Self {
        let mut out = self.clone();
        out.x_lo += delta;
        out.x_hi += delta;
        out.dense = self.dense.translated(delta);
        for p in &mut out.characteristic_points {
            p.0 += delta;
        }
        if let Some(t) = &mut out.tail_left {
            t.x_anchor += delta;
        }
        if let Some(t) = &mut out.tail_right {
            t.x_anchor += delta;
        }
        out
    }
}

/// A discontinuity with stored one-sided traces.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Jump {
    pub position: f64,
    pub u_left: f64,
    pub u_right: f64,
}

/// A piecewise regular traveling wave: speed, sorted jumps, smooth pieces
/// covering the complement, and endstates.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WaveProfile {
    pub sigma: f64,
    pub discontinuities: Vec<Jump>,
    pub pieces: Vec<ProfilePiece>,
    /// Limits at -infinity and +infinity.
    pub endstates: (f64, f64),
}

impl WaveProfile {
    /// Index of the piece whose closure contains `x` (ties at a jump go to
    /// the right piece).
    pub fn piece_index(&self, x: f64) -> usize {
        let mut idx = 0;
        for (k, d) in self.discontinuities.iter().enumerate() {
            if x >= d.position {
                idx = k + 1;
            }
        }
        idx
    }

    /// Profile value; exactly at a jump, the right trace.
    pub fn value(&self, x: f64) -> f64 {
        self.pieces[self.piece_index(x)].value(x)
    }

    pub fn value_left(&self, x: f64) -> f64 {
        for d in &self.discontinuities {
            if x == d.position {
                return d.u_left;
            }
        }
        self.value(x)
    }

    pub fn value_right(&self, x: f64) -> f64 {
        for d in &self.discontinuities {
            if x == d.position {
                return d.u_right;
            }
        }
        self.value(x)
    }

    /// `U'` through the profile ODE, `U' = F_sigma(U)`; exact where the
    /// profile is exact and smooth across the switch branch.
    pub fn derivative(&self, nl: &Nonlinearity, x: f64) -> f64 {
        let piece = &self.pieces[self.piece_index(x)];
        if piece.constant.is_some() {
            return 0.0;
        }
        vector_field(nl, self.sigma, piece.value(x)).unwrap_or(0.0)
    }

    /// All characteristic points across pieces, sorted.
    pub fn characteristic_points(&self) -> Vec<(f64, f64)> {
        let mut pts: Vec<(f64, f64)> = self
            .pieces
            .iter()
            .flat_map(|p| p.characteristic_points.iter().copied())
            .collect();
        pts.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        pts
    }

    pub fn translated(&self, delta: f64) -> Self {
        Self {
            sigma: self.sigma,
            discontinuities: self
                .discontinuities
                .iter()
                .map(|d| Jump {
                    position: d.position + delta,
                    ..*d
                })
                .collect(),
            pieces: self.pieces.iter().map(|p| p.translated(delta)).collect(),
            endstates: self.endstates,
        }
    }

    /// `|f(u_r) - f(u_l) - sigma (u_r - u_l)|` at one jump.
    pub fn rh_residual(&self, nl: &Nonlinearity, jump: &Jump) -> f64 {
        (nl.f(jump.u_right) - nl.f(jump.u_left) - self.sigma * (jump.u_right - jump.u_left)).abs()
    }

    /// Strict Lax margins `(f'(u_l) - sigma, sigma - f'(u_r))` at one jump.
    pub fn lax_margins(&self, nl: &Nonlinearity, jump: &Jump) -> (f64, f64) {
        (
            nl.f1(jump.u_left) - self.sigma,
            self.sigma - nl.f1(jump.u_right),
        )
    }

    /// Minimum Oleinik margin over `n` interior sample values.
    pub fn oleinik_min_margin(&self, nl: &Nonlinearity, jump: &Jump, n: usize) -> (f64, f64) {
        let (ul, ur) = (jump.u_left, jump.u_right);
        let mut min_margin = f64::INFINITY;
        let mut arg = f64::NAN;
        for i in 1..=n {
            let t = i as f64 / (n + 1) as f64;
            let v = ul + t * (ur - ul);
            let left = (nl.f(v) - nl.f(ul)) / (v - ul);
            let right = (nl.f(v) - nl.f(ur)) / (v - ur);
            let margin = left - right;
            if margin < min_margin {
                min_margin = margin;
                arg = v;
            }
        }
        (min_margin, arg)
    }

    /// Jump eigenvalue `[g(U)]_d / [U]_d` from stored traces.
    pub fn jump_eigenvalue(&self, nl: &Nonlinearity, jump: &Jump) -> f64 {
        (nl.g(jump.u_right) - nl.g(jump.u_left)) / (jump.u_right - jump.u_left)
    }

    /// Max residual of the profile ODE over `n` samples per piece, using the
    /// derivative of the stored dense representation.
    pub fn ode_residual_max(&self, nl: &Nonlinearity, n: usize) -> f64 {
        let mut worst = 0.0f64;
        for piece in &self.pieces {
            if piece.constant.is_some() {
                for i in 0..n {
                    let u = piece.left_limit;
                    let _ = i;
                    let res = nl.g(u).abs();
                    worst = worst.max(res);
                }
                continue;
            }
            let (lo, hi) = piece.dense.span();
            for i in 0..n {
                let x = lo + (hi - lo) * (i as f64 + 0.5) / n as f64;
                let u = piece.value(x);
                let du = piece.dense.eval_deriv(x);
                let res = ((nl.f1(u) - self.sigma) * du - nl.g(u)).abs();
                worst = worst.max(res);
            }
        }
        worst
    }

    /// Verify the standing admissibility invariants, returning the list of
    /// violations (empty when admissible).
    pub fn admissibility_violations(&self, nl: &Nonlinearity) -> Vec<String> {
        let mut out = Vec::new();
        let scale = 1.0 + nl.f_prime_scale() * nl.state_scale();
        for jump in &self.discontinuities {
            if self.rh_residual(nl, jump) > 1e-9 * scale {
                out.push(format!(
                    "Rankine-Hugoniot residual {:.3e} at d={}",
                    self.rh_residual(nl, jump),
                    jump.position
                ));
            }
            let (ml, mr) = self.lax_margins(nl, jump);
            if ml <= 0.0 || mr <= 0.0 {
                out.push(format!(
                    "Lax margins ({ml:.3e}, {mr:.3e}) at d={}",
                    jump.position
                ));
            }
            let (margin, v) = self.oleinik_min_margin(nl, jump, 100);
            if margin <= 0.0 {
                out.push(format!(
                    "Oleinik margin {margin:.3e} at v={v} (d={})",
                    jump.position
                ));
            }
        }
        out
    }

    pub fn require_admissible(&self, nl: &Nonlinearity) -> Result<()> {
        let v = self.admissibility_violations(nl);
        if v.is_empty() {
            Ok(())
        } else {
            Err(CoreError::AssumptionViolated(v))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reflect_quartic_matches_substitution() {
        let p = [1.0, -2.0, 0.5, 3.0, -1.25];
        let q = reflect_quartic(&p);
        for i in 0..=10 {
            let s = i as f64 / 10.0;
            let eval = |c: &[f64; 5], t: f64| {
                (((c[4] * t + c[3]) * t + c[2]) * t + c[1]) * t + c[0]
            };
            assert!((eval(&p, 1.0 - s) - eval(&q, s)).abs() < 1e-12);
        }
    }
}
