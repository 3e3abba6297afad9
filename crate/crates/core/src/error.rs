use thiserror::Error;

/// Every failure the toolkit can report.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("band structure not converged: lowest band moved by {shift:.3e} E_R when the plane-wave basis was doubled")]
    NotConverged { shift: f64 },

    #[error("state is not normalized (norm squared = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("state is not reachable: |<psi|T_{j}|psi>| = {magnitude:.3e}")]
    Unreachable { j: i64, magnitude: f64 },

    #[error("boundary amplitude {amplitude:.3e} above threshold with a {sites}-site window")]
    Leakage { amplitude: f64, sites: usize },

    #[error("gradient not supported here: {0}")]
    GradientNotAllowed(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("required Rabi frequency {required:.6} exceeds the limit {limit:.6}")]
    RabiAboveLimit { required: f64, limit: f64 },

    #[error("target has no finite Wannier support: {0}")]
    InfiniteSupport(String),

    #[error("schema error: {0}")]
    Schema(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
