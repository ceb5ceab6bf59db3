use thiserror::Error;

/// Errors raised while building nonlinearities and wave profiles.
#[derive(Debug, Clone, Error)]
pub enum CoreError {
    #[error("derivative order {order} of {which} not available (max {max})")]
    InsufficientSmoothness {
        which: &'static str,
        order: usize,
        max: usize,
    },
    #[error("supplied derivative {which}^({order}) disagrees with finite differences: rel err {rel_err:.3e} at u={at}")]
    DerivativeMismatch {
        which: &'static str,
        order: usize,
        at: f64,
        rel_err: f64,
    },
    #[error("non-finite evaluation of {which} at u={at}")]
    NonFiniteEvaluation { which: &'static str, at: f64 },
    #[error("state {u} outside the admissible domain [{lo}, {hi}]")]
    OutOfDomain { u: f64, lo: f64, hi: f64 },
    #[error("characteristic value u={u} is degenerate: |f'(u)-sigma|<={tau:.3e} and |f''(u)|<=1e-12")]
    CharacteristicDegenerate { u: f64, tau: f64 },
    #[error("profile left the admissible domain at x={x} (u={u})")]
    BlowUp { x: f64, u: f64 },
    #[error("profile integration exceeded the step budget without reaching an event (x={x}, u={u})")]
    StallNoEquilibrium { x: f64, u: f64 },
    #[error("assumption violated: {0:?}")]
    AssumptionViolated(Vec<String>),
    #[error("root not bracketed while solving {context} on [{lo}, {hi}]")]
    RootNotBracketed {
        context: &'static str,
        lo: f64,
        hi: f64,
    },
    #[error("degenerate jump: equal left/right states u={0}")]
    DegenerateJump(f64),
    #[error("Oleinik condition failed at intermediate value v={v} (margin {margin:.3e})")]
    OleinikFailed { v: f64, margin: f64 },
    #[error("Rankine-Hugoniot root solve diverged at jump index {0}")]
    NewtonDiverged(usize),
    #[error("prescribed characteristic positions outside the family neighborhood: {0}")]
    OutOfFamilyBall(String),
    #[error("g must be negative on [{lo}, {hi}]; found g({at})={val}")]
    SignViolation { lo: f64, hi: f64, at: f64, val: f64 },
    #[error("window expansion did not converge: {0}")]
    WindowNotConverged(String),
    #[error("invalid serialized profile: {0}")]
    InvalidSerialization(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
