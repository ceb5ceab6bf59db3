//! Stability classification of traveling waves.
//!
//! The verdict is decided by three local sign criteria: the source must damp
//! at endstates (`g'(u_inf) < 0`), at jumps (`[g(U)]_d/[U]_d < 0`), and must
//! amplify at characteristic values (`g'(u_star) > 0`). A wave failing any
//! criterion carries an explicit instability witness; a wave passing all of
//! them falls into one of five stable shape classes.

pub mod classify;
pub mod generic;
pub mod nondegenerate;
pub mod spectral_report;
pub mod structure;
pub mod witness;

pub use classify::{classify, verdict_from_structure};
pub use generic::{check_generic_pair, GenericPairReport};
pub use nondegenerate::{check_nondegenerate, CheckItem, NondegeneracyReport};
pub use spectral_report::{spectral_report, CharLadder, SpectralReport};
pub use structure::{structure_report, PieceStructure, StructureReport};
pub use witness::{Classification, InstabilityWitness, Verdict};

/// Margin below which a strict sign condition counts as degenerate rather
/// than decided, relative to the rate scale of the pair.
pub const STRICTNESS_MARGIN: f64 = 1e-10;
