use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum SimError {
    #[error("initial data leaves the admissible state domain at x={x} (u={u})")]
    DomainExit { x: f64, u: f64 },
    #[error("broken characteristics inside the query range of region {0}")]
    BrokenRegion(usize),
    #[error("more than {0} events in one step")]
    EventCascadeOverflow(usize),
    #[error("tracked shock lost its Lax margin at t={t} (margins {left:.3e}, {right:.3e})")]
    ShockDies { t: f64, left: f64, right: f64 },
    #[error("background shock collapsed at t={0}; inconsistent with a stable fixture")]
    ShockLost(f64),
    #[error("{count} sign changes while locating the characteristic point (perturbation too large)")]
    MultipleRoots { count: usize },
    #[error("trace stencil exhausted on the {side} side of the shock at {pos}")]
    TraceStencil { side: &'static str, pos: f64 },
    #[error("{0}")]
    Core(#[from] waves_core::CoreError),
}

pub type Result<T> = std::result::Result<T, SimError>;
