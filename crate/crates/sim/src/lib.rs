//! Entropy solutions near traveling waves by the method of characteristics
//! with explicit shock tracking.
//!
//! Characteristics carry `(X, v, dX, dv)` with `v' = g(v)`, `X' = f'(v)` and
//! the variational equations; shocks move at the averaged flux slope of
//! their traces. Wave breaking shows up as `dX -> 0`. The named experiments
//! reproduce the constructive stability and instability dynamics: growth at
//! a non-damping endstate, gradient blow-up at a damping characteristic
//! value, runaway shock offsets, front relaxation at its sharp rate, the
//! drift of small perturbing shocks, and convergence of perturbed composite
//! waves to the member of their family pinned by the characteristic points.

pub mod diag;
pub mod error;
pub mod experiments;
pub mod field;
pub mod interp;
pub mod shock;
pub mod stepper;

pub use diag::{Comparison, ExperimentResult, TimeSeries};
pub use error::SimError;
pub use field::{
    init_field, locate_characteristic_point, CharStatus, Characteristic, CharacteristicField,
    Perturbation, SamplingSpec, Snapshot,
};
pub use shock::{ShockCurve, ShockSample, TrackedShock};
pub use stepper::{step, BreakingPolicy, StepOutcome, StepPolicy};
