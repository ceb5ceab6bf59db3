//! Named, reproducible experiments packaging the constructive stability and
//! instability dynamics.

mod charpoint;
mod composite;
mod front_decay;
mod infinity;
mod shock;
mod small_shock;

pub use charpoint::{run_experiment_charpoint, CharpointParams};
pub use composite::{run_experiment_composite, CompositeParams};
pub use front_decay::{run_experiment_front_decay, FrontDecayParams};
pub use infinity::{run_experiment_infinity, InfinityParams};
pub use shock::{run_experiment_shock, ShockParams};
pub use small_shock::{run_experiment_small_shock, SmallShockParams};

use crate::error::Result;
use crate::field::CharacteristicField;
use crate::stepper::{step, StepOutcome, StepPolicy};

/// Drive the field to `t_final`, invoking `observe` at every `every`-th
/// step (and at t=0); stops early on wave breaking.
pub fn run_to<F: FnMut(&CharacteristicField)>(
    field: &mut CharacteristicField,
    policy: &StepPolicy,
    t_final: f64,
    every: usize,
    mut observe: F,
) -> Result<Option<(f64, f64)>> {
    observe(field);
    let mut i = 0usize;
    while field.t < t_final - 0.5 * policy.dt {
        match step(field, policy)? {
            StepOutcome::Advanced => {}
            StepOutcome::Broke { t, x } => return Ok(Some((t, x))),
        }
        i += 1;
        if i % every == 0 {
            observe(field);
        }
    }
    Ok(None)
}

/// Sup over active characteristics of `quantity` within a window.
pub fn sup_over_chars<F: Fn(&crate::field::Characteristic) -> f64>(
    field: &CharacteristicField,
    window: (f64, f64),
    quantity: F,
) -> f64 {
    let mut sup = 0.0f64;
    for region in &field.regions {
        for c in region.active() {
            if c.pos >= window.0 && c.pos <= window.1 {
                sup = sup.max(quantity(c));
            }
        }
    }
    sup
}

/// `L^p` norm of the positive part of `v - level` over the active
/// characteristics (trapezoid in the current positions).
pub fn lp_positive_part(field: &CharacteristicField, level: f64, p: f64) -> f64 {
    if p.is_infinite() {
        return sup_over_chars(field, (f64::NEG_INFINITY, f64::INFINITY), |c| {
            (c.val - level).max(0.0)
        });
    }
    let mut acc = 0.0;
    for region in &field.regions {
        let active: Vec<_> = region.active().collect();
        for w in active.windows(2) {
            let dx = w[1].pos - w[0].pos;
            let fa = (w[0].val - level).max(0.0).powf(p);
            let fb = (w[1].val - level).max(0.0).powf(p);
            acc += 0.5 * dx * (fa + fb);
        }
    }
    acc.powf(1.0 / p)
}
