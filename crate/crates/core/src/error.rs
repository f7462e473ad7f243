use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("sigma_x must be positive, got {0}")]
    NonPositiveSigma(f64),

    #[error("degenerate dynamic range: A2 ({a2}) must exceed A1 ({a1})")]
    DegenerateRange { a1: f64, a2: f64 },

    #[error("malformed interval [{lo}, {hi}]")]
    MalformedInterval { lo: f64, hi: f64 },

    #[error("moment order {0} not supported (expected 0, 1 or 2)")]
    UnsupportedOrder(u32),

    #[error("table needs at least {min} knots, got {got}")]
    TooFewKnots { min: usize, got: usize },

    #[error("grid is not strictly increasing at row {row}")]
    NonMonotoneGrid { row: usize },

    #[error("negative density {value} at row {row}")]
    NegativeDensity { row: usize, value: f64 },

    #[error("table has zero total mass")]
    ZeroMass,

    #[error("bad CSV header: expected `{expected}`, found `{found}`")]
    BadHeader { expected: String, found: String },

    #[error("invalid mapping: {0}")]
    InvalidMapping(String),

    #[error("device curve is not strictly increasing at knot {index}")]
    NonMonotoneDevice { index: usize },

    #[error("device output range [{lo}, {hi}] does not cover [0, 1]")]
    DeviceRangeNotCovered { lo: f64, hi: f64 },

    #[error("noise ratio t must be {expected}, got {got}")]
    InvalidNoise { expected: &'static str, got: f64 },

    #[error("input distribution is not even (c1 mismatch {mismatch:e})")]
    AsymmetricInput { mismatch: f64 },

    #[error("root not bracketed on [{lo}, {hi}] (residuals {f_lo:e}, {f_hi:e})")]
    BracketFailure { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("no fixed point converged after {starts} starts x {max_iter} iterations")]
    NoConvergence { starts: usize, max_iter: usize },

    #[error("R = {0} outside (0, 1]; parameters are not a consistent optimum")]
    InconsistentParams(f64),

    #[error("invalid sliver: {0}")]
    InvalidSliver(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
