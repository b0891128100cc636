use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed input: {0}")]
    Parse(String),
    #[error("empty mask")]
    EmptyMask,
    #[error("contour needs at least 3 distinct points, got {0}")]
    TooFewPoints(usize),
    #[error("resample count must be at least 3, got {0}")]
    InvalidResampleCount(usize),
    #[error("degenerate angle: coincident points")]
    DegenerateAngle,
    #[error("insufficient break-points: need at least 2, got {0}")]
    InsufficientBreakPoints(usize),
    #[error("degenerate GS: {0}")]
    DegenerateGs(&'static str),
    #[error("empty edge map")]
    EmptyEdgeMap,
    #[error("canvas mismatch: {0}")]
    CanvasMismatch(String),
    #[error("invalid parameter {key}: {reason}")]
    InvalidParam { key: String, reason: String },
    #[error("invalid match list: {0}")]
    InvalidMatchList(String),
    #[error("instance too large for exhaustive search: {0} segments (max {1})")]
    InstanceTooLarge(usize, usize),
    #[error("zero-length junction vector")]
    ZeroLengthVector,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
