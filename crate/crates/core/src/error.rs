use std::path::PathBuf;

use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("file not found: {}", .0.display())]
    FileNotFound(PathBuf),

    #[error("i/o error on {}: {message}", .path.display())]
    Io { path: PathBuf, message: String },

    /// `row` is the 1-based line number in the file; the header is row 1.
    #[error("parse error at row {row}, column {column:?}: {token:?} ({reason})")]
    ParseError {
        row: usize,
        column: String,
        token: String,
        reason: String,
    },

    #[error("column {0:?} not found in header")]
    MissingColumn(String),

    #[error("dates are not strictly increasing at row {row}: {previous} then {current}")]
    NonMonotonicDates {
        row: usize,
        previous: String,
        current: String,
    },

    #[error("series {0:?} carries no date labels")]
    MissingLabels(String),

    #[error("no overlapping dates")]
    NoOverlap,

    #[error("invalid time series: {0}")]
    InvalidSeries(String),

    #[error("series too short: need at least {needed} values, got {got}")]
    TooShort { needed: usize, got: usize },

    #[error("segment length {tau} exceeds series length {len}")]
    TauTooLarge { tau: usize, len: usize },

    #[error("segment of length {len} cannot be detrended with order {order} (need at least {})", order + 2)]
    DegenerateFit { len: usize, order: usize },

    #[error("segment {segment} at tau = {tau} has zero detrended variance; moments of order q <= 0 are undefined")]
    ZeroVarianceSegment { tau: usize, segment: usize },

    #[error("invalid analysis configuration: {0}")]
    ConfigInvalid(String),

    #[error("need at least {needed} scale points inside the fit range, got {got}")]
    InsufficientPoints { needed: usize, got: usize },

    #[error("non-positive fluctuation value at q = {q}, tau = {tau}")]
    NonFiniteLog { q: f64, tau: usize },

    #[error("invalid generator parameters: {0}")]
    InvalidGenerator(String),

    #[error("circulant embedding failed: eigenvalue {eigenvalue:e} at index {index} is negative")]
    EmbeddingFailure { index: usize, eigenvalue: f64 },

    #[error("series lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("constant overlap window at lag {0}; correlation undefined")]
    ZeroVariance(i64),

    #[error("max lag {max_lag} too large for series of length {len} (need len - max_lag >= 3)")]
    LagTooLarge { max_lag: usize, len: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
