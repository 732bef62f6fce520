use thiserror::Error;

/// Errors produced by the tomography toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum StrobeError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("non-finite entry in matrix input")]
    NonFinite,

    #[error("empty input: {0}")]
    Empty(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("numeric failure: {0}")]
    NumericFailure(String),

    #[error("ill-conditioned {what}: condition estimate {condition:e} (limit {limit:e})")]
    IllConditioned {
        what: String,
        condition: f64,
        limit: f64,
    },

    #[error("repeated nodes in interpolation problem")]
    RepeatedNodes,

    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("parameters outside the channel domain: {0}")]
    InvalidDomain(String),

    #[error("operation not supported for {0} families")]
    UnsupportedModel(&'static str),

    #[error("time must be nonnegative, got {0}")]
    NegativeTime(f64),

    #[error("matrix is not Hermitian (defect {0:e})")]
    NotHermitian(f64),

    #[error("generator is not optimal: index of cyclicity {eta}")]
    NotOptimal { eta: usize },

    #[error("observable does not span the operator space (rank {rank} of {required})")]
    Inadmissible { rank: usize, required: usize },

    #[error("no admissible observable found after {0} draws")]
    SamplingCapExceeded(usize),

    #[error("invalid time grid: {0}")]
    InvalidGrid(String),

    #[error("measurement records do not match the plan: {0}")]
    RecordMismatch(String),

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("record io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, StrobeError>;
