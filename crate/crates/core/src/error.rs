use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid argument `{name}`: {reason}")]
    InvalidArgument { name: &'static str, reason: String },

    #[error("field length {got} does not match grid node count {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("CFL violation: dt = {dt} exceeds cfl_safety * dr = {limit}")]
    Cfl { dt: f64, limit: f64 },

    #[error("data support reaches r = {r_supp}, but the horizon needs it inside r = {limit}")]
    Support { r_supp: f64, limit: f64 },

    #[error("tridiagonal solve hit a zero pivot at row {0}")]
    ZeroPivot(usize),

    #[error("solver produced a non-finite value")]
    NonFinite,

    #[error("{0}")]
    Config(String),

    #[error("not enough points for a fit: need {needed}, got {got}")]
    InsufficientPoints { needed: usize, got: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidArgument {
        name,
        reason: reason.into(),
    }
}
