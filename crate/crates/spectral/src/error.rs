use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum SpectralError {
    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),
    #[error("bump support touches {0}")]
    SupportLeak(String),
    #[error("insufficient smoothness: {0}")]
    InsufficientSmoothness(String),
    #[error("Re(lambda) = {re_lambda} is not to the right of -theta_(a,k) = {neg_theta}")]
    SpectralSide { re_lambda: f64, neg_theta: f64 },
    #[error("window expansion did not stabilize: {0}")]
    WindowNotConverged(String),
    #[error("{0}")]
    Core(#[from] waves_core::CoreError),
}

pub type Result<T> = std::result::Result<T, SpectralError>;
