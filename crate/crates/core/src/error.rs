use alloc::vec::Vec;

/// Errors raised by the tensor, linear-algebra, sampling and estimation routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("mode {mode} is out of range for an order-{order} tensor")]
    ModeOutOfRange { mode: usize, order: usize },
    #[error("shape mismatch: expected {expected:?}, found {found:?}")]
    ShapeMismatch { expected: Vec<usize>, found: Vec<usize> },
    #[error("invalid shape {0:?}: every dimension must be positive and the data length must match")]
    InvalidShape(Vec<usize>),
    #[error("empty input: {0}")]
    Empty(&'static str),
    #[error("rank {rank} exceeds dimension {dim} in mode {mode}")]
    RankExceedsDimension { mode: usize, rank: usize, dim: usize },
    #[error("matrix is numerically rank deficient (diagonal ratio {ratio:e})")]
    RankDeficient { ratio: f64 },
    #[error("value {value} is outside the open interval ({lo}, {hi})")]
    OutOfInterval { value: f64, lo: f64, hi: f64 },
    #[error("point {0} lies on the support [-2, 2]")]
    OnSupport(f64),
    #[error("non-finite value encountered: {0}")]
    NonFinite(&'static str),
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
