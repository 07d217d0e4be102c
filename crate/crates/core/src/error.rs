use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("basis mismatch between operands")]
    BasisMismatch,

    #[error("invalid factor a[{index}] = {value}: need 0 < |a| < 1")]
    InvalidFactor { index: usize, value: f64 },

    #[error("invalid weight: {0}")]
    InvalidWeight(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("index {index} is below the closed-form threshold {threshold}")]
    BelowThreshold { index: i64, threshold: i64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("elimination breakdown at U_{t}: pivot {pivot:e}")]
    EliminationBreakdown { t: usize, pivot: f64 },

    #[error("recursion breakdown at step {step}: corner coefficient {gamma0:e}")]
    RecursionBreakdown { step: usize, gamma0: f64 },

    #[error("quadrature did not converge: resolution {resolution}, last change {change:e}")]
    QuadratureNotConverged { resolution: usize, change: f64 },

    #[error("ill-conditioned weight: Gram-Schmidt pivot {pivot:e} at slot ({i}, {j})")]
    IllConditioned { i: usize, j: usize, pivot: f64 },

    #[error("unreliable oracle: Gram matrix condition number {condition:e}")]
    UnreliableOracle { condition: f64 },

    #[error("degenerate window: nullspace dimension {nullity} (expected 1)")]
    DegenerateWindow { nullity: usize },

    #[error("anomaly: {0}")]
    Anomaly(String),

    #[error("construction inconsistency: residual {residual:e} exceeds {tol:e} ({what})")]
    Residual {
        what: String,
        residual: f64,
        tol: f64,
    },

    #[error("triangularity violation {value:e} at ({i}, {j})")]
    Triangularity { i: usize, j: usize, value: f64 },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
