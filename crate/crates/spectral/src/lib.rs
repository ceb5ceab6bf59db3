//! Concrete verification of the spectral theory around traveling waves:
//! discrete application of the linearized operator (with its jump
//! component), Weyl-sequence quotients at infinity, the Dirac-derivative
//! adjoint ladders at characteristic points, the damping weights chi_k with
//! their rates theta_k, the weighted star norm, and the explicit resolvent
//! formula with its contraction bound.

pub mod chi;
pub mod error;
pub mod fd;
pub mod grid;
pub mod ladder;
pub mod operator;
pub mod resolvent;
pub mod star_norm;
pub mod taylor;
pub mod weyl;

pub use chi::{weight_chi, ChiWeight};
pub use error::SpectralError;
pub use grid::{profile_grid, GridFunction, JumpData};
pub use ladder::{adjoint_ladder, ladder_residual, DiracLadder};
pub use operator::{apply_l, key_derivative_identity_check};
pub use resolvent::{resolvent_solve, ResolventOutput};
pub use star_norm::{equivalence_constants, project_zero_mode, star_norm};
pub use weyl::{weyl_quotient, weyl_sweep, WeylOptions, WeylPoint};
