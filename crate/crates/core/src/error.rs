use thiserror::Error;

#[derive(Debug, Error)]
pub enum GspError {
    #[error("matrix is not square: {0} x {1}")]
    NotSquare(usize, usize),

    #[error("graph must have at least one node")]
    EmptyGraph,

    #[error("non-finite value in input")]
    NonFinite,

    #[error("node {node} has non-positive degree {degree}; D^(-1/2) is not real")]
    NegativeDegree { node: usize, degree: f64 },

    #[error("all eigenvalues are zero")]
    ZeroSpectrum,

    #[error("matrix is not symmetric (max |a_ij - a_ji| = {max_asymmetry:e})")]
    NotSymmetric { max_asymmetry: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("basis kind does not fit this operation: {0}")]
    KindMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("scale {0} outside (0, 1)")]
    ScaleOutOfRange(f64),

    #[error("channel {0} has zero variance")]
    ZeroVarianceChannel(usize),

    #[error("signal rows are not standardised (row {row}: mean {mean:e}, sd {sd})")]
    NotNormalized { row: usize, mean: f64, sd: f64 },

    #[error("optimiser did not converge after {iters} iterations (gradient norm {grad_norm:e})")]
    NotConverged { iters: usize, grad_norm: f64 },

    #[error("sample count {0} is odd; folds need equal class sizes")]
    OddSampleCount(usize),

    #[error("signal of length {len} shorter than segment length {segment}")]
    SignalTooShort { len: usize, segment: usize },

    #[error("expected a vector of length {expected}, got {found}")]
    WrongLength { expected: usize, found: usize },

    #[error("training set is empty")]
    EmptyTrainingSet,

    #[error("training set contains a single class")]
    SingleClassTrainingSet,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, GspError>;
