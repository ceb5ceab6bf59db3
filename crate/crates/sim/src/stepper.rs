//! Time stepping: RK4 characteristic advance with variational equations,
//! Heun advance of tracked shocks, and event handling (absorption, wave
//! breaking, merges, Lax collapse) with graded reseeding.

use rayon::prelude::*;

use crate::error::{Result, SimError};
use crate::field::{CharStatus, Characteristic, CharacteristicField};
use crate::interp::hermite;
use crate::shock::trace_from_region;

/// What to do when `dX` hits zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BreakingPolicy {
    /// record the breaking point and stop the run (the instability proofs
    /// end at breaking)
    HaltReport,
    /// seed a zero-amplitude tracked shock at the breaking locus
    InsertShock,
}

#[derive(Debug, Clone, Copy)]
pub struct StepPolicy {
    pub dt: f64,
    pub breaking: BreakingPolicy,
    /// reseed when a gap exceeds this multiple of the local target gap
    pub reseed_factor: f64,
    pub event_cap: usize,
}

impl Default for StepPolicy {
    fn default() -> Self {
        Self {
            dt: 1e-3,
            breaking: BreakingPolicy::HaltReport,
            reseed_factor: 4.0,
            event_cap: 10_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum StepOutcome {
    Advanced,
    /// wave breaking under the halt policy: (t, x) of the first event
    Broke { t: f64, x: f64 },
}

fn advance_char(nl: &waves_core::Nonlinearity, c: &Characteristic, dt: f64) -> Characteristic {
    // state (v, X, dv, dX) with v' = g(v), X' = f'(v), dv' = g'(v) dv,
    // dX' = f''(v) dv
    let f = |_t: f64, y: &[f64; 4]| {
        [
            nl.g(y[0]),
            nl.f1(y[0]),
            nl.g1(y[0]) * y[2],
            nl.f2(y[0]) * y[2],
        ]
    };
    let y = waves_core::num::ode::rk4_step(&f, 0.0, &[c.val, c.pos, c.d_val, c.d_pos], dt);
    Characteristic {
        val: y[0],
        pos: y[1],
        d_val: y[2],
        d_pos: y[3],
        ..*c
    }
}

/// One time step.
pub fn step(field: &mut CharacteristicField, policy: &StepPolicy) -> Result<StepOutcome> {
    let dt = policy.dt;
    let nl = field.nl.clone();
    let t0 = field.t;

    // previous positions needed for shock stages and event bisection
    let olds: Vec<Vec<Characteristic>> = field
        .regions
        .iter()
        .map(|r| r.chars.clone())
        .collect();

    // 1. characteristic advance (independent per characteristic)
    for region in field.regions.iter_mut() {
        region
            .chars
            .par_iter_mut()
            .filter(|c| c.status == CharStatus::Active)
            .for_each(|c| *c = advance_char(&nl, c, dt));
    }

    // 2. shock advance: Heun with traces interpolated from the old field at
    // the start stage and the new field at the end stage
    let n_shocks = field.shocks.len();
    for si in 0..n_shocks {
        if !field.shocks[si].alive {
            continue;
        }
        let pos0 = field.shocks[si].pos;
        let (l0, r0) = shock_traces_at(field, Some(&olds), si, pos0)?;
        let k1 = waves_core::slope(&nl, l0.0, r0.0);
        let pred = pos0 + dt * k1;
        let (l1, r1) = shock_traces_at(field, None, si, pred)?;
        let k2 = waves_core::slope(&nl, l1.0, r1.0);
        let new_pos = pos0 + 0.5 * dt * (k1 + k2);
        let (lf, rf) = shock_traces_at(field, None, si, new_pos)?;
        let s = &mut field.shocks[si];
        s.pos = new_pos;
        s.u_left = lf.0;
        s.u_right = rf.0;
        s.slope_left = lf.1;
        s.slope_right = rf.1;
    }

    field.t = t0 + dt;

    // 3. events
    let mut events = 0usize;

    // (a) absorption: characteristics that ended on the wrong side of a
    // bounding live shock
    let live: Vec<(usize, f64)> = field
        .shocks
        .iter()
        .enumerate()
        .filter(|(_, s)| s.alive)
        .map(|(i, s)| (i, s.pos))
        .collect();
    for (rank, &(_, pos)) in live.iter().enumerate() {
        // region `rank` is left of this shock, `rank+1` right of it
        if let Some(region) = field.regions.get_mut(rank) {
            for c in region.chars.iter_mut() {
                if c.status == CharStatus::Active && c.pos >= pos - 1e-10 {
                    c.status = CharStatus::Absorbed;
                    events += 1;
                }
            }
        }
        if let Some(region) = field.regions.get_mut(rank + 1) {
            for c in region.chars.iter_mut() {
                if c.status == CharStatus::Active && c.pos <= pos + 1e-10 {
                    c.status = CharStatus::Absorbed;
                    events += 1;
                }
            }
        }
    }

    // (b) wave breaking: dX through zero; bisect the crossing time on the
    // linear-in-time model within the step
    let mut first_break: Option<(f64, f64)> = None;
    for (ri, region) in field.regions.iter_mut().enumerate() {
        for (ci, c) in region.chars.iter_mut().enumerate() {
            if c.status == CharStatus::Active && c.d_pos <= 0.0 {
                let old = &olds[ri][ci];
                let frac = if old.d_pos > 0.0 {
                    old.d_pos / (old.d_pos - c.d_pos)
                } else {
                    0.0
                };
                let t_break = t0 + frac * dt;
                let x_break = old.pos + frac * (c.pos - old.pos);
                c.status = CharStatus::Broken;
                events += 1;
                if first_break.map_or(true, |(tb, _)| t_break < tb) {
                    first_break = Some((t_break, x_break));
                }
            }
        }
    }
    if let Some((tb, xb)) = first_break {
        field.breaking_events.push((tb, xb));
        match policy.breaking {
            BreakingPolicy::HaltReport => return Ok(StepOutcome::Broke { t: tb, x: xb }),
            BreakingPolicy::InsertShock => {
                // zero-amplitude shock at the breaking locus
                let u = field.value_at(xb).unwrap_or(f64::NAN);
                let rank = field
                    .shocks
                    .iter()
                    .filter(|s| s.alive && s.pos < xb)
                    .count();
                let mut shock = crate::shock::TrackedShock::new(xb, u, u);
                shock.record(field.t, &nl);
                field.shocks.insert(rank, shock);
                // split the region at the breaking point
                let region_idx = rank;
                let old_region = field.regions[region_idx].chars.clone();
                let (left, right): (Vec<_>, Vec<_>) =
                    old_region.into_iter().partition(|c| c.pos < xb);
                field.regions[region_idx] = crate::field::Region { chars: left };
                field
                    .regions
                    .insert(region_idx + 1, crate::field::Region { chars: right });
            }
        }
    }

    // (c) shock merges: positions out of order collapse into one shock
    loop {
        let live_idx: Vec<usize> = field
            .shocks
            .iter()
            .enumerate()
            .filter(|(_, s)| s.alive)
            .map(|(i, _)| i)
            .collect();
        let mut merged = false;
        for w in live_idx.windows(2) {
            let (i, j) = (w[0], w[1]);
            if field.shocks[i].pos >= field.shocks[j].pos {
                // the region between them disappears
                let rank = live_idx.iter().position(|&k| k == i).unwrap();
                let mid = 0.5 * (field.shocks[i].pos + field.shocks[j].pos);
                let u_l = field.shocks[i].u_left;
                let u_r = field.shocks[j].u_right;
                field.shocks[i].alive = false;
                field.shocks[j].pos = mid;
                field.shocks[j].u_left = u_l;
                field.shocks[j].u_right = u_r;
                for c in field.regions[rank + 1].chars.iter_mut() {
                    c.status = CharStatus::Absorbed;
                }
                let absorbed = field.regions.remove(rank + 1);
                field.regions[rank]
                    .chars
                    .extend(absorbed.chars.into_iter());
                field.regions[rank]
                    .chars
                    .sort_by(|a, b| a.pos.partial_cmp(&b.pos).unwrap());
                events += 1;
                merged = true;
                break;
            }
        }
        if !merged {
            break;
        }
        if events > policy.event_cap {
            return Err(SimError::EventCascadeOverflow(policy.event_cap));
        }
    }

    // (d) Lax collapse: the shock dies (rarefaction takeover) and the
    // neighboring regions join. The threshold tolerates trace-interpolation
    // jitter once the amplitude is exhausted: a zero-amplitude shock rides
    // its characteristic instead of being removed.
    let lax_floor = -1e-8 * nl.f_prime_scale();
    let mut si = 0usize;
    while si < field.shocks.len() {
        if field.shocks[si].alive {
            let (ml, mr) = field.shocks[si].lax_margins(&nl);
            if ml < lax_floor || mr < lax_floor {
                let rank = field
                    .shocks
                    .iter()
                    .take(si)
                    .filter(|s| s.alive)
                    .count();
                field.shocks[si].alive = false;
                let right = field.regions.remove(rank + 1);
                field.regions[rank].chars.extend(right.chars.into_iter());
                field.regions[rank]
                    .chars
                    .sort_by(|a, b| a.pos.partial_cmp(&b.pos).unwrap());
                events += 1;
            }
        }
        si += 1;
    }
    if events > policy.event_cap {
        return Err(SimError::EventCascadeOverflow(policy.event_cap));
    }

    // 4. graded reseeding: keep the local gap under the target multiple
    let specials = field.special_points();
    for region in field.regions.iter_mut() {
        let mut inserts: Vec<(usize, Characteristic)> = Vec::new();
        let chars = &region.chars;
        let mut prev: Option<usize> = None;
        for (i, c) in chars.iter().enumerate() {
            if c.status != CharStatus::Active {
                continue;
            }
            if let Some(pi) = prev {
                let a = &chars[pi];
                let gap = c.pos - a.pos;
                let mid = 0.5 * (a.pos + c.pos);
                let dist = specials
                    .iter()
                    .map(|s| (mid - s).abs())
                    .fold(f64::INFINITY, f64::min);
                let target = field.spec.target_gap(dist);
                if gap > policy.reseed_factor * target && gap > 2.0 * field.spec.h_min {
                    let val = hermite(a.pos, a.val, a.slope(), c.pos, c.val, c.slope(), mid);
                    let slope = crate::interp::hermite_deriv(
                        a.pos,
                        a.val,
                        a.slope(),
                        c.pos,
                        c.val,
                        c.slope(),
                        mid,
                    );
                    // the sensitivity pair is defined up to the seed gauge;
                    // fix d_pos by the geometric mean (exact for the
                    // exponential fan) and force du/dx consistency
                    let d_pos = (a.d_pos * c.d_pos).max(0.0).sqrt().max(f64::MIN_POSITIVE);
                    let d_val = slope * d_pos;
                    inserts.push((
                        i,
                        Characteristic {
                            x0: f64::NAN,
                            pos: mid,
                            val,
                            d_pos,
                            d_val,
                            status: CharStatus::Active,
                        },
                    ));
                }
            }
            prev = Some(i);
        }
        for (offset, (i, c)) in inserts.into_iter().enumerate() {
            region.chars.insert(i + offset, c);
        }
    }

    // 5. edge inflow: refill regions that drain inward from a window edge
    if let Some((val, d_val)) = field.inflow_left {
        let x_lo = field.spec.window.0;
        let region = field.regions.first_mut().unwrap();
        let first = region.chars.iter().find(|c| c.status == CharStatus::Active);
        if first.map_or(true, |c| c.pos > x_lo + field.spec.h_base) {
            region.chars.insert(
                0,
                Characteristic {
                    x0: x_lo,
                    pos: x_lo,
                    val,
                    d_pos: 1.0,
                    d_val,
                    status: CharStatus::Active,
                },
            );
        }
    }
    if let Some((val, d_val)) = field.inflow_right {
        let x_hi = field.spec.window.1;
        let region = field.regions.last_mut().unwrap();
        let last = region
            .chars
            .iter()
            .rev()
            .find(|c| c.status == CharStatus::Active);
        if last.map_or(true, |c| c.pos < x_hi - field.spec.h_base) {
            region.chars.push(Characteristic {
                x0: x_hi,
                pos: x_hi,
                val,
                d_pos: 1.0,
                d_val,
                status: CharStatus::Active,
            });
        }
    }

    // absorbed characteristics carry no further information; drop them so
    // trace stencils and scans stay linear in the live population
    for region in field.regions.iter_mut() {
        if region
            .chars
            .iter()
            .any(|c| c.status == CharStatus::Absorbed)
        {
            region.chars.retain(|c| c.status != CharStatus::Absorbed);
        }
    }

    // record shock history
    let t_now = field.t;
    for s in field.shocks.iter_mut().filter(|s| s.alive) {
        s.record(t_now, &nl);
    }

    Ok(StepOutcome::Advanced)
}

/// One-sided traces (value, slope) at `pos` around shock `si`, taken from
/// the regions the shock separates. Passing `olds` samples the pre-step
/// field state.
fn shock_traces_at(
    field: &CharacteristicField,
    olds: Option<&Vec<Vec<Characteristic>>>,
    si: usize,
    pos: f64,
) -> Result<((f64, f64), (f64, f64))> {
    let rank = field
        .shocks
        .iter()
        .take(si)
        .filter(|s| s.alive)
        .count();
    let chars_of = |idx: usize| -> &[Characteristic] {
        match olds {
            Some(o) => &o[idx],
            None => &field.regions[idx].chars,
        }
    };
    let l = trace_from_region(chars_of(rank), pos, true).ok_or(SimError::TraceStencil {
        side: "left",
        pos,
    })?;
    let r = trace_from_region(chars_of(rank + 1), pos, false).ok_or(SimError::TraceStencil {
        side: "right",
        pos,
    })?;
    Ok((l, r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{init_field, Perturbation, SamplingSpec};
    use waves_core::catalog;

    #[test]
    fn unperturbed_front_is_stationary_in_the_frame() {
        let nl = catalog::figure().unwrap();
        let wave = catalog::figure_front(&nl).unwrap();
        let spec = SamplingSpec::new((-6.0, 6.0), 0.05);
        let mut field = init_field(&wave, &nl, &Perturbation::None, &spec).unwrap();
        let policy = StepPolicy::default();
        for _ in 0..1000 {
            assert_eq!(step(&mut field, &policy).unwrap(), StepOutcome::Advanced);
        }
        // sup_i |v_i - U(X_i - sigma t)| at t = 1
        let mut sup = 0.0f64;
        for region in &field.regions {
            for c in region.active() {
                sup = sup.max((c.val - wave.value(c.pos - wave.sigma * field.t)).abs());
            }
        }
        assert!(sup <= 1e-9, "drift {sup}");
    }

    #[test]
    fn value_ode_matches_the_tangent_closed_form() {
        // v' = sin(pi v): tan(pi v/2) = tan(pi v0/2) e^(pi t)
        let nl = catalog::figure().unwrap();
        let n_steps = 1000;
        let dt = 1e-3;
        let f = |_t: f64, y: &[f64; 1]| [nl.g(y[0])];
        let v0 = 0.2;
        let mut y = [v0];
        for _ in 0..n_steps {
            y = waves_core::num::ode::rk4_step(&f, 0.0, &y, dt);
        }
        let t = n_steps as f64 * dt;
        let pi = std::f64::consts::PI;
        let expect = 2.0 / pi * ((pi * v0 / 2.0).tan() * (pi * t).exp()).atan();
        assert!((y[0] - expect).abs() <= 1e-9, "{} vs {expect}", y[0]);
    }

    #[test]
    fn rk4_trajectory_error_scales_at_fourth_order() {
        let nl = catalog::figure().unwrap();
        let pi = std::f64::consts::PI;
        let exact = |t: f64, v0: f64| 2.0 / pi * ((pi * v0 / 2.0).tan() * (pi * t).exp()).atan();
        let f = |_t: f64, y: &[f64; 1]| [nl.g(y[0])];
        let mut errors = Vec::new();
        for &dt in &[2e-3, 1e-3] {
            let n = (1.0 / dt) as usize;
            let mut y = [0.2];
            for _ in 0..n {
                y = waves_core::num::ode::rk4_step(&f, 0.0, &y, dt);
            }
            errors.push((y[0] - exact(1.0, 0.2)).abs());
        }
        let factor = errors[0] / errors[1];
        assert!(
            (factor - 16.0).abs() <= 0.3 * 16.0,
            "order factor {factor} ({errors:?})"
        );
    }

    #[test]
    fn riemann_shock_stays_put_and_absorbs() {
        let nl = catalog::figure().unwrap();
        let wave = catalog::figure_riemann(&nl).unwrap();
        let spec = SamplingSpec::new((-5.0, 5.0), 0.05);
        let mut field = init_field(&wave, &nl, &Perturbation::None, &spec).unwrap();
        let policy = StepPolicy::default();
        for _ in 0..500 {
            step(&mut field, &policy).unwrap();
        }
        let s = &field.shocks[0];
        assert!(s.alive);
        assert!(s.pos.abs() < 1e-9, "shock drifted to {}", s.pos);
        // left characteristics move right into the shock, are absorbed and
        // pruned, and the window edge refills the region
        assert!(field.regions[0].active_count() > 0);
        assert!(field.regions[0]
            .chars
            .iter()
            .filter(|c| c.status == CharStatus::Active)
            .all(|c| c.pos < s.pos));
        // every retained sample keeps strict margins and tiny RH residual
        for sample in &s.history.samples {
            assert!(sample.lax_left > 0.0 && sample.lax_right > 0.0);
            assert!(sample.rh_residual <= 1e-9);
        }
    }

    #[test]
    fn ordering_is_preserved_until_breaking() {
        let nl = catalog::breaking().unwrap();
        let wave = catalog::breaking_front(&nl).unwrap();
        let spec = SamplingSpec::new((-2.0, 2.0), 0.01);
        let eps = 0.05f64;
        let eta = 1.0 / (1.0 / eps).ln();
        let p = Perturbation::CharSeed {
            eps,
            eta,
            x_star: 0.0,
        };
        let mut field = init_field(&wave, &nl, &p, &spec).unwrap();
        let policy = StepPolicy::default();
        loop {
            match step(&mut field, &policy).unwrap() {
                StepOutcome::Advanced => {
                    for region in &field.regions {
                        let mut prev = f64::NEG_INFINITY;
                        for c in region.active() {
                            assert!(c.pos > prev, "ordering violated at t={}", field.t);
                            prev = c.pos;
                        }
                    }
                    if field.t > 3.0 {
                        panic!("expected breaking before t=3");
                    }
                }
                StepOutcome::Broke { t, x } => {
                    assert!(t > 0.0 && x.abs() < 0.5);
                    break;
                }
            }
        }
    }
}
