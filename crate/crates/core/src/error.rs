use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the finite neighborhood-space operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("a carrier needs at least one point")]
    EmptyCarrier,
    #[error("carrier has {0} points, at most {max} are supported", max = crate::MAX_CARRIER)]
    CarrierTooLarge(usize),
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error(
        "invalid label `{0}`: labels must be nonempty and free of whitespace, `[`, `]` and `,`"
    )]
    InvalidLabel(String),
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error("point index {index} is outside a carrier of {len} points")]
    PointOutOfRange { index: usize, len: usize },
    #[error("subset {0:#b} is not contained in the carrier")]
    SubsetOutOfCarrier(u32),
    #[error("carrier mismatch: {0}")]
    CarrierMismatch(&'static str),
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("map is not surjective")]
    NotSurjective,
    #[error("invalid neighborhood structure at `{point}`: {reason}")]
    InvalidStructure { point: String, reason: String },
    #[error("{what} is limited to carriers of at most {max} points (got {size})")]
    TooLarge {
        what: &'static str,
        size: usize,
        max: usize,
    },
    #[error("invalid search bounds: {0}")]
    InvalidBounds(String),
    #[error("parse error: {0}")]
    Parse(String),
}
