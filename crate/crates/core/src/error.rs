use thiserror::Error;

/// Errors raised by the soliton library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolitonError {
    #[error("dimension must be ≥ 2 (got n = {0})")]
    InvalidDimension(i64),
    #[error("alpha must be positive and finite (got {0})")]
    InvalidAlpha(f64),
    #[error("logarithmic branch (alpha = 1): C(alpha, n) is undefined, use the log-branch expansion")]
    LogarithmicBranch,
    #[error("series order must be even and within [2, 12] (got {0})")]
    SeriesOrder(usize),
    #[error("{what} must be nonnegative (got {value})")]
    Negative { what: &'static str, value: f64 },
    #[error("tolerance must lie in [1e-13, 1e-6] (got {0})")]
    InvalidTolerance(f64),
    #[error("invalid range: {0}")]
    InvalidRange(String),
    #[error("non-finite state during integration at t = {t}")]
    NonFinite { t: f64 },
    #[error("step size underflow at t = {t}")]
    StepUnderflow { t: f64 },
    #[error("grid too coarse for finite differences: gap {gap} in s exceeds {limit}")]
    GridTooCoarse { gap: f64, limit: f64 },
    #[error("ill-conditioned fit: condition number {0:e} exceeds 1e12")]
    IllConditioned(f64),
    #[error("fit window holds {found} samples, at least {needed} required")]
    WindowTooSmall { found: usize, needed: usize },
    #[error("point at radius {radius} lies outside the computed domain [0, {t_max}]")]
    OutsideDomain { radius: f64, t_max: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("io error: {0}")]
    Io(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = SolitonError> = std::result::Result<T, E>;

impl From<std::io::Error> for SolitonError {
    fn from(e: std::io::Error) -> Self {
        SolitonError::Io(e.to_string())
    }
}
