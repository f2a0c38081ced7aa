use thiserror::Error;

/// Errors raised by the laboratory. Verification outcomes are reported, not raised.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FloerError {
    #[error("level {0} outside the supported scale {{-1}} ∪ [0, 2]")]
    LevelOutOfRange(f64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("grid of {points} points aliases truncation N = {truncation} (need at least {required})")]
    Aliasing { points: usize, truncation: usize, required: usize },
    #[error("invalid loop: {0}")]
    InvalidLoop(String),
    #[error("loop leaves the chart domain at grid point {index} (t = {t:.6}), point {point:?}")]
    OutOfChart { index: usize, t: f64, point: Vec<f64> },
    #[error("chart has no inverse: {0}")]
    MissingInverse(String),
    #[error("charts `{0}` and `{1}` do not overlap on the corpus")]
    EmptyOverlap(String, String),
    #[error("invalid multiplication signature: {0}")]
    InvalidSignature(String),
    #[error("phase space dimension {0} is odd")]
    OddDimension(usize),
    #[error("operator is not symmetric at level 0 (relative residual {0:e})")]
    Asymmetric(f64),
    #[error("loop is not in U2: {0}")]
    NotInU2(String),
    #[error("parameter out of range: {0}")]
    Parameter(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, FloerError>;
