//! Library surface of the command line: expression parsing and
//! differentiation, run configuration, command implementations.

pub mod commands;
pub mod config;
pub mod deriv;
pub mod expr;
pub mod output;

pub use deriv::differentiate;
pub use expr::{parse_expression, Expr, ExprKind, SyntaxError};
