use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CmvError {
    #[error("evaluation at z = 0 of a Laurent polynomial with negative powers")]
    ZeroArgument,

    #[error("trust horizon exhausted in {op}: window {window} is too small")]
    HorizonExhausted { op: &'static str, window: usize },

    #[error("window mismatch: {left} vs {right}")]
    WindowMismatch { left: usize, right: usize },

    #[error("invalid Verblunsky coefficient at index {index}: {reason}")]
    InvalidVerblunsky { index: usize, reason: String },

    #[error("moment Gram matrix is not positive definite at step {index}")]
    GramNotPositive { index: usize },

    #[error("operator does not commute with the CMV matrix")]
    NotInCentralizer,

    #[error("reconstructed symbol does not reproduce the operator within the horizon")]
    ReconstructionMismatch,

    #[error("ad-image is not a scalar multiple of the identity")]
    NotConstantMultiple,

    #[error("operator is not tridiagonal")]
    NotTridiagonal,

    #[error("window too small: {reason}")]
    WindowTooSmall { reason: String },

    #[error("singular values straddle the rank threshold {threshold:e} (nearest {nearest:e})")]
    RankAmbiguous { threshold: f64, nearest: f64 },

    #[error("no differential operator of order <= {order} reproduces the operator")]
    NoSolution { order: usize },

    #[error("internal cross-check failed: {what}")]
    CrossCheckFailed { what: &'static str },

    #[error("invalid solve pattern: {0}")]
    InvalidPattern(String),

    #[error("solution failed re-verification: {0}")]
    VerificationFailed(String),
}

pub type Result<T> = std::result::Result<T, CmvError>;
