//! Scalar Dormand-Prince 5(4) integrator with continuous (dense) output.
//!
//! The profile ODE is scalar and smooth, so a single hand-rolled embedded
//! pair with Hairer's quartic interpolant covers every use in this workspace.

/// One accepted integration step together with its dense-output coefficients.
///
/// On `[x, x + h]` the solution is evaluated as
/// `u(x + θh) = r1 + θ(r2 + (1-θ)(r3 + θ(r4 + (1-θ) r5)))` with `θ ∈ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DenseStep {
    pub x: f64,
    pub h: f64,
    pub rcont: [f64; 5],
}

impl DenseStep {
    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        let theta = (x - self.x) / self.h;
        let [r1, r2, r3, r4, r5] = self.rcont;
        r1 + theta * (r2 + (1.0 - theta) * (r3 + theta * (r4 + (1.0 - theta) * r5)))
    }

    #[inline]
    pub fn end_x(&self) -> f64 {
        self.x + self.h
    }
}

/// Piecewise-quartic dense solution produced by [`dopri5`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DenseSolution {
    pub steps: Vec<DenseStep>,
}

impl DenseSolution {
    /// Span covered by the accepted steps, as (min x, max x).
    pub fn span(&self) -> (f64, f64) {
        if self.steps.is_empty() {
            return (f64::NAN, f64::NAN);
        }
        let a = self.steps.first().unwrap();
        let b = self.steps.last().unwrap();
        let (s0, s1) = (a.x, b.end_x());
        (s0.min(s1), s0.max(s1))
    }

    /// Evaluate at `x`; clamps to the nearest covered step outside the span.
    pub fn eval(&self, x: f64) -> f64 {
        debug_assert!(!self.steps.is_empty());
        let forward = self.steps[0].h > 0.0;
        // binary search over step starts, honoring integration direction
        let mut lo = 0usize;
        let mut hi = self.steps.len();
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            let starts_before = if forward {
                self.steps[mid].x <= x
            } else {
                self.steps[mid].x >= x
            };
            if starts_before {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        self.steps[lo].eval(x)
    }
}

pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub h0: Option<f64>,
    /// Cap on the step size; also bounds the interpolant's derivative error.
    pub max_h: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-10,
            h0: None,
            max_h: f64::INFINITY,
            max_steps: 200_000,
        }
    }
}

/// Outcome of an event-controlled integration.
pub enum OdeOutcome {
    /// Reached `x_end` without an event firing.
    ReachedEnd { u_end: f64 },
    /// An event function crossed zero; integration stopped at the root.
    Event { index: usize, x: f64, u: f64 },
    /// Step budget exhausted.
    StepBudget { x: f64, u: f64 },
}

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
// b - bhat, for the embedded error estimate
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
// dense-output weights (Hairer, Norsett, Wanner DOPRI5)
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

/// Integrate `u' = f(x, u)` from `(x0, u0)` toward `x_end`, recording dense
/// output into `sol` and stopping at the first sign change of any event
/// function (evaluated on accepted steps, then located on the interpolant).
pub fn dopri5<F>(
    f: F,
    x0: f64,
    u0: f64,
    x_end: f64,
    opts: &OdeOptions,
    events: &mut [&mut dyn FnMut(f64, f64) -> f64],
    sol: &mut DenseSolution,
) -> OdeOutcome
where
    F: Fn(f64, f64) -> f64,
{
    let dir = (x_end - x0).signum();
    if dir == 0.0 || (x_end - x0).abs() == 0.0 {
        return OdeOutcome::ReachedEnd { u_end: u0 };
    }
    let mut x = x0;
    let mut u = u0;
    let mut k1 = f(x, u);
    let mut h = opts.h0.unwrap_or_else(|| {
        let scale = opts.atol + opts.rtol * u.abs();
        let d0 = (u.abs() / scale).max(1e-8);
        let d1 = (k1.abs() / scale).max(1e-8);
        (0.01 * (d0 / d1)).min((x_end - x0).abs()).max(1e-10)
    }) * dir;

    let mut ev_prev: Vec<f64> = events.iter_mut().map(|e| e(x, u)).collect();

    for _ in 0..opts.max_steps {
        if (x - x_end) * dir >= 0.0 {
            return OdeOutcome::ReachedEnd { u_end: u };
        }
        if h.abs() > opts.max_h {
            h = opts.max_h * dir;
        }
        if (x + h - x_end) * dir > 0.0 {
            h = x_end - x;
        }

        let mut k = [0.0f64; 7];
        k[0] = k1;
        for i in 1..7 {
            let mut ui = 0.0;
            for (j, kj) in k.iter().enumerate().take(i) {
                ui += A[i][j] * kj;
            }
            k[i] = f(x + C[i] * h, u + h * ui);
        }
        let u_new = u + h * (A[6][0] * k[0] + A[6][2] * k[2] + A[6][3] * k[3] + A[6][4] * k[4] + A[6][5] * k[5]);
        let err_raw: f64 = E.iter().zip(&k).map(|(e, kk)| e * kk).sum::<f64>() * h;
        let scale = opts.atol + opts.rtol * u.abs().max(u_new.abs());
        let err = (err_raw / scale).abs();

        if err <= 1.0 || h.abs() <= 1e-14 * (1.0 + x.abs()) {
            // accept
            let ydiff = u_new - u;
            let bspl = h * k[0] - ydiff;
            let r5 = h * D.iter().zip(&k).map(|(d, kk)| d * kk).sum::<f64>();
            let step = DenseStep {
                x,
                h,
                rcont: [u, ydiff, bspl, ydiff - h * k[6] - bspl, r5],
            };
            sol.steps.push(step);

            let x_new = x + h;
            // event detection on the accepted step
            for (idx, ev) in events.iter_mut().enumerate() {
                let val = ev(x_new, u_new);
                if ev_prev[idx] == 0.0 {
                    ev_prev[idx] = val;
                    continue;
                }
                if val == 0.0 || (val.signum() != ev_prev[idx].signum()) {
                    // bisect in x on the dense interpolant
                    let mut lo = x;
                    let mut hi = x_new;
                    let mut flo = ev_prev[idx];
                    for _ in 0..200 {
                        let mid = 0.5 * (lo + hi);
                        let fm = ev(mid, step.eval(mid));
                        if fm == 0.0 || (hi - lo).abs() < 1e-12 * h.abs() {
                            lo = mid;
                            break;
                        }
                        if fm.signum() == flo.signum() {
                            lo = mid;
                            flo = fm;
                        } else {
                            hi = mid;
                        }
                    }
                    let xr = 0.5 * (lo + hi);
                    return OdeOutcome::Event {
                        index: idx,
                        x: xr,
                        u: step.eval(xr),
                    };
                }
                ev_prev[idx] = val;
            }

            x = x_new;
            u = u_new;
            k1 = k[6]; // FSAL
            let fac = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            h *= fac;
        } else {
            let fac = (0.9 * err.powf(-0.2)).clamp(0.2, 1.0);
            h *= fac;
        }
    }
    OdeOutcome::StepBudget { x, u }
}

/// Classic fixed-step RK4 for small systems, used by closed-form oracles.
pub fn rk4_step<const N: usize, F>(f: &F, t: f64, y: &[f64; N], dt: f64) -> [f64; N]
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let k1 = f(t, y);
    let mut y2 = *y;
    for i in 0..N {
        y2[i] = y[i] + 0.5 * dt * k1[i];
    }
    let k2 = f(t + 0.5 * dt, &y2);
    for i in 0..N {
        y2[i] = y[i] + 0.5 * dt * k2[i];
    }
    let k3 = f(t + 0.5 * dt, &y2);
    for i in 0..N {
        y2[i] = y[i] + dt * k3[i];
    }
    let k4 = f(t + dt, &y2);
    let mut out = *y;
    for i in 0..N {
        out[i] = y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay_dense_output() {
        let mut sol = DenseSolution::default();
        let out = dopri5(
            |_, u| -u,
            0.0,
            1.0,
            5.0,
            &OdeOptions::default(),
            &mut [],
            &mut sol,
        );
        match out {
            OdeOutcome::ReachedEnd { u_end } => {
                assert!((u_end - (-5.0f64).exp()).abs() < 1e-9);
            }
            _ => panic!("expected end"),
        }
        for i in 0..=50 {
            let x = 0.1 * i as f64;
            assert!((sol.eval(x) - (-x).exp()).abs() < 1e-9, "x={x}");
        }
    }

    #[test]
    fn backward_integration() {
        let mut sol = DenseSolution::default();
        let out = dopri5(
            |_, u| u,
            0.0,
            1.0,
            -3.0,
            &OdeOptions::default(),
            &mut [],
            &mut sol,
        );
        match out {
            OdeOutcome::ReachedEnd { u_end } => {
                assert!((u_end - (-3.0f64).exp()).abs() < 1e-10)
            }
            _ => panic!("expected end"),
        }
        assert!((sol.eval(-1.5) - (-1.5f64).exp()).abs() < 1e-9);
    }

    #[test]
    fn event_located_on_interpolant() {
        // u' = 1, event at u = 2.5
        let mut sol = DenseSolution::default();
        let mut ev = |_x: f64, u: f64| u - 2.5;
        let out = dopri5(
            |_, _| 1.0,
            0.0,
            0.0,
            10.0,
            &OdeOptions::default(),
            &mut [&mut ev],
            &mut sol,
        );
        match out {
            OdeOutcome::Event { x, u, .. } => {
                assert!((x - 2.5).abs() < 1e-9);
                assert!((u - 2.5).abs() < 1e-9);
            }
            _ => panic!("expected event"),
        }
    }
}
