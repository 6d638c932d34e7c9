use thiserror::Error;

/// Errors raised anywhere in the spectral engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("coordinate x = {x} is outside the domain of a potential singular at the origin")]
    Domain { x: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("energy {energy} is at a threshold (E = ±m); use the isolated-solution construction")]
    ThresholdEnergy { energy: f64 },

    #[error("spinor is identically zero")]
    ZeroSpinor,

    #[error("spinor must be normalized before computing a residual")]
    NotNormalized,

    #[error("grid too coarse: h^2 * max U = {measure:.3e} (must stay below 0.5)")]
    GridTooCoarse { measure: f64 },

    #[error("eigenvalue {level} not converged: successive grids differ by {relative_change:.3e} (tolerance {tolerance:.1e})")]
    NonConverged {
        level: usize,
        relative_change: f64,
        tolerance: f64,
    },

    #[error("configuration is not purely pseudoscalar (vector and scalar terms must vanish)")]
    NotPurePseudoscalar,

    #[error("divergent integral: {0}")]
    DivergentIntegral(String),

    #[error("isolated solution is not normalizable: {0}")]
    NotNormalizable(String),

    #[error("operation requires a Cornell pseudoscalar potential")]
    NotCornell,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
