use thiserror::Error;

use crate::models::VgFit;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at data row {row}: {message}")]
    Parse { row: usize, message: String },

    #[error("series `{0}` has no non-missing observations")]
    EmptySeries(String),

    #[error("missing input series in {dir}: {}", series.join(", "))]
    MissingSeries { dir: String, series: Vec<String> },

    #[error("alignment error: {0}")]
    Alignment(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("singular design: columns {columns:?} are (numerically) collinear")]
    SingularDesign { columns: Vec<String> },

    #[error("invalid design: {0}")]
    InvalidDesign(String),

    #[error("zero variance in {0}")]
    ZeroVariance(String),

    #[error("sample size too small for {what}: need at least {need}, got {got}")]
    SampleSize {
        what: &'static str,
        need: usize,
        got: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("moments infeasible for a variance-gamma law: {reason}")]
    InfeasibleMoments { reason: String, nearest: Box<VgFit> },

    #[error("simulation diverged at step {step}: {message}")]
    Divergence { step: usize, message: String },

    #[error("unsupported model schema version {found} (expected {expected})")]
    SchemaVersion { found: u32, expected: u32 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("model file parse error: {0}")]
    Json(#[from] serde_json::Error),
}
