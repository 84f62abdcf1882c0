use thiserror::Error;

/// Errors produced by the game library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported geometry: {0}")]
    UnsupportedGeometry(String),

    /// A closed form or construction is not available for the requested
    /// parameter range.
    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),

    #[error("empty input: {0}")]
    Empty(String),

    #[error("network is not eulerian: {0}")]
    NotEulerian(String),

    #[error("points are unreachable from each other")]
    Unreachable,

    #[error("points do not lie on a common edge")]
    DifferentEdges,

    #[error("walk violates the unit speed limit: {0}")]
    SpeedLimit(String),

    #[error("r-tour covering check failed at ({0}, {1})")]
    CoverageFailed(f64, f64),

    #[error("grids are not nested between refinement levels {0} and {1}")]
    NotNested(usize, usize),

    /// Walk enumeration hit its budget; `partial_lower` is the best certified
    /// lower bound computed with the walks enumerated so far.
    #[error("walk family exceeds budget of {budget} walks (partial lower bound {partial_lower})")]
    BudgetExceeded { budget: usize, partial_lower: f64 },

    #[error("non-finite payoff entry at ({0}, {1})")]
    NonFinite(usize, usize),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
