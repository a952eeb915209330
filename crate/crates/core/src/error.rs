use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameters for {family}: {reason}")]
    InvalidParameters { family: String, reason: String },

    #[error("integration diverged at t = {t}: |z| = {radius} leaves the disc")]
    IntegrationDiverged { t: f64, radius: f64 },

    #[error("near collision: |z1 - z2| = {distance:e} at t = {t}")]
    NearCollision { t: f64, distance: f64 },

    #[error("argument unwrapping failed to resolve the branch near t = {t}")]
    UnwrapFailed { t: f64 },

    #[error("sampling degeneracy: {redraws} near-collision redraws for {samples} samples")]
    SamplingDegeneracy { redraws: u64, samples: u64 },

    #[error("trajectories are not sampled on the same time grid")]
    GridMismatch,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures of the numerics themselves (as opposed to bad input).
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::IntegrationDiverged { .. }
                | Error::NearCollision { .. }
                | Error::UnwrapFailed { .. }
                | Error::SamplingDegeneracy { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
