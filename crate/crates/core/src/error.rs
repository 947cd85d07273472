use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid spin: 2S = {0} (must be >= 1)")]
    InvalidSpin(u32),

    #[error("invalid chain: {0}")]
    InvalidSpec(String),

    #[error("hilbert dimension (2S+1)^N overflows for 2S = {two_s}, N = {n_sites}")]
    DimensionOverflow { two_s: u32, n_sites: usize },

    #[error("hilbert dimension {dim} exceeds the memory budget of {budget} amplitudes")]
    MemoryBudget { dim: usize, budget: usize },

    #[error("shape mismatch: expected length {expected}, got {actual}")]
    Shape { expected: usize, actual: usize },

    #[error("dense oracle limited to dimension {limit}, requested {dim}")]
    OracleLimitExceeded { dim: usize, limit: usize },

    #[error("lanczos did not converge after {iterations} iterations (best residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("block size {block} out of range 1..={max}")]
    InvalidBlock { block: usize, max: usize },

    #[error("site {site} out of range for a chain of {n_sites} sites")]
    InvalidSite { site: usize, n_sites: usize },

    #[error("non-physical reduced density matrix: eigenvalue {0:e}")]
    NonPhysicalRdm(f64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported entropic index q = {0} (q must be > 0)")]
    UnsupportedQ(f64),

    #[error("sweep aborted at lambda = {lambda}: {source}")]
    SweepAborted {
        lambda: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("grid must be uniform, ascending and hold at least 3 points: {0}")]
    InsufficientGrid(String),

    #[error("fit is underdetermined: {got} points, need at least {need}")]
    Underdetermined { got: usize, need: usize },

    #[error("gamma must be positive and finite, got {gamma} at N = {n}")]
    InvalidGamma { n: usize, gamma: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("extensivity range too short: N = {0} (need N >= 6)")]
    RangeTooShort(usize),

    #[error("config error in `{key}`: {message}")]
    Config { key: String, message: String },

    #[error("oracle check failed: {0}")]
    OracleFailure(String),

    #[error("plot error: {0}")]
    Plot(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn config(key: &str, message: impl Into<String>) -> Self {
        Error::Config {
            key: key.to_string(),
            message: message.into(),
        }
    }

    /// Process exit code used by the command-line runner.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config { .. } => 2,
            Error::OracleFailure(_) => 4,
            Error::Plot(_) => 5,
            Error::Io(_) | Error::Json(_) => 1,
            _ => 3,
        }
    }
}
