//! Traveling waves of scalar balance laws `∂t u + ∂x f(u) = g(u)`.
//!
//! This crate builds and validates traveling-wave profiles: the pair of
//! nonlinearities `(f, g)`, the profile ODE `(f'(U) - σ) U' = g(U)` and its
//! integration with dense output, and the assembly of continuous fronts,
//! Riemann shocks, composite waves and family-shifted waves together with
//! their admissibility checks (Rankine-Hugoniot, Lax, Oleinik).

pub mod builders;
pub mod catalog;
pub mod error;
pub mod extension;
pub mod nonlinearity;
pub mod num;
pub mod profile;
pub mod profile_ode;
pub mod serialize;

pub use builders::{
    build_composite, build_front, build_front_raw, build_glued_front_pair, build_riemann,
    build_two_char_wave, construct_family_member, CompositeKind, CompositeSpec, FamilyShift,
};
pub use error::CoreError;
pub use nonlinearity::{slope, FnTable, Nonlinearity, SmoothFn};
pub use profile::{Jump, Monotonicity, ProfilePiece, TailModel, WaveProfile};
pub use profile_ode::{integrate_profile, vector_field, IntegrationOptions, StopCondition};
