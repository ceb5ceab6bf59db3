//! Shared numerical kernels: adaptive ODE integration with dense output,
//! adaptive quadrature, bracketed root solving, C-infinity bumps, rate fits.

pub mod bump;
pub mod fit;
pub mod ode;
pub mod quad;
pub mod roots;
