use thiserror::Error;

/// Errors raised across the library and the experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid penalty configuration: {0}")]
    InvalidParameter(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("operation `{op}` requires a log-sum or lq penalty, got {family}")]
    UnsupportedFamily { op: &'static str, family: String },

    #[error("no nonzero stationary point: y = {y} is below tau = {tau}")]
    NoNonzeroMinimizer { y: f64, tau: f64 },

    #[error("stepsize regime error: {0}")]
    Regime(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("solver diverged at iteration {iteration}: non-finite objective")]
    Divergence {
        iteration: usize,
        trace: Box<crate::solver::SolverTrace>,
    },

    #[error("size limit exceeded: {0}")]
    Size(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code used by the `sortedprox` binary.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Config(_) | Error::Parse { .. } | Error::Io(_) | Error::InvalidParameter(_) => 2,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
