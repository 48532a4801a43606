use thiserror::Error;

/// Failure modes of the analytic pipeline and the direct solver.
///
/// Every numerical variant names the stage that produced it so that the CLI
/// can report where a parameter point broke down.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum SkinError {
    #[error("parameter out of domain: {0}")]
    ParameterDomain(String),

    #[error("degenerate coefficient at mu = {mu}: |lambda| = {magnitude:e} (point lies on a spectral boundary)")]
    DegenerateCoefficient { mu: f64, magnitude: f64 },

    #[error("{stage}: no convergence ({detail})")]
    NonConvergence { stage: &'static str, detail: String },

    #[error("spectral boundary: {0}")]
    SpectralBoundary(String),

    #[error("{stage}: inconsistent results ({detail})")]
    Inconsistency { stage: &'static str, detail: String },

    #[error("root selection failed at mu = {mu}: {detail}")]
    RootSelection { mu: f64, detail: String },

    #[error("point {re} + {im}i is within {tol:e} of the cut; use the boundary-value evaluation")]
    NearCut { re: f64, im: f64, tol: f64 },

    #[error("index-one regularization failed: {0}")]
    Regularization(String),

    #[error("discrete zeros too close to each other: {0}")]
    DegenerateSpectrum(String),

    #[error("direct solver diverged: {0}")]
    OracleDivergence(String),

    #[error("domain truncation too short: {0}")]
    Truncation(String),
}

impl SkinError {
    /// Short stage name used in CLI diagnostics.
    pub fn stage(&self) -> &'static str {
        match self {
            SkinError::ParameterDomain(_) => "params",
            SkinError::DegenerateCoefficient { .. } => "dispersion",
            SkinError::NonConvergence { stage, .. } => stage,
            SkinError::SpectralBoundary(_) => "spectrum",
            SkinError::Inconsistency { stage, .. } => stage,
            SkinError::RootSelection { .. } => "spectrum",
            SkinError::NearCut { .. } => "factor",
            SkinError::Regularization(_) => "factor",
            SkinError::DegenerateSpectrum(_) => "solution",
            SkinError::OracleDivergence(_) => "oracle",
            SkinError::Truncation(_) => "oracle",
        }
    }
}

pub type Result<T> = std::result::Result<T, SkinError>;
