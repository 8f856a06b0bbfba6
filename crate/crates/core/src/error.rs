use thiserror::Error;

/// Errors from permutation parsing and arithmetic. Positions are byte
/// offsets into the parsed text (0-based); points are reported 1-based.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("point {point} at position {pos} exceeds degree {degree}")]
    PointOutOfRange { point: usize, degree: usize, pos: usize },
    #[error("point {point} repeated at position {pos}")]
    RepeatedPoint { point: usize, pos: usize },
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
}

#[derive(Error, Debug)]
pub enum Error {
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error("degree {degree} exceeds the configured limit {limit}")]
    DegreeLimit { degree: usize, limit: usize },
    #[error("group order {order} exceeds the configured bound {bound}")]
    OrderLimit { order: String, bound: String },
    #[error("point {point} is outside 1..={degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("group is not transitive")]
    NotTransitive,
    #[error("not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unsupported parameters: {0}")]
    Unsupported(String),
    #[error("resource budget exceeded: {0}")]
    Resource(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Resource(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
