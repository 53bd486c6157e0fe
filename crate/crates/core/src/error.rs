use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("level {level} exceeds truncation N = {trunc}")]
    Truncation { level: usize, trunc: usize },

    #[error("truncation mismatch: {0} vs {1}")]
    TruncationMismatch(usize, usize),

    #[error("malformed action: {0}")]
    MalformedAction(String),

    #[error("partition {partition} has size {size}, expected level {level}")]
    PartitionMismatch {
        partition: String,
        size: usize,
        level: usize,
    },

    #[error("cannot compose maps: {0}")]
    Composition(String),

    #[error("element is not fixed by the Young subgroup of {0}")]
    NotInvariant(String),

    #[error(
        "resource cap exceeded at level {level}: cover dimension {dim} > cap {cap} \
         (while attaching summands for partition {partition})"
    )]
    ResourceCap {
        level: usize,
        dim: usize,
        cap: usize,
        partition: String,
    },

    #[error("dimension {dim} at level {level} exceeds the cap {cap}")]
    DimensionOverflow { level: usize, dim: usize, cap: usize },

    #[error("parse error at line {line}, token `{token}`: {message}")]
    Parse {
        line: usize,
        token: String,
        message: String,
    },

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("no oracle: {0}")]
    OracleUnavailable(String),

    #[error("sequence is not exact: {0}")]
    NotExact(String),

    #[error("map is not surjective: {0}")]
    NotSurjective(String),

    #[error("cache error: {0}")]
    Cache(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
