use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("densities live on different supports: {0} vs {1}")]
    SupportMismatch(String, String),

    #[error("non-finite density value {value} at {at}")]
    NonFinite { at: f64, value: f64 },

    #[error("{atoms} atoms exceed the exhaustive-subset limit of {limit}; use l1_distance instead")]
    TooManyAtoms { atoms: usize, limit: usize },

    #[error("point {0} lies outside the support")]
    OutOfSupport(f64),

    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("truncated tail mass {mass:e} exceeds {limit:e}")]
    TailMass { mass: f64, limit: f64 },

    #[error("quadrature did not converge on [{lo}, {hi}] (last difference {diff:e})")]
    Quadrature { lo: f64, hi: f64, diff: f64 },

    #[error("estimator undefined: {0}")]
    UndefinedEstimator(String),

    #[error("estimate does not match loss target: {0}")]
    TargetMismatch(String),

    #[error("posterior weights underflowed on every grid node; retry in log-space")]
    Underflow,

    #[error("{failures} of {reps} replicates failed (limit 1%); first failure: {first}")]
    TooManyFailures {
        failures: usize,
        reps: usize,
        first: String,
    },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("config field `{field}`: {msg}")]
    Config { field: String, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn config(field: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            msg: msg.into(),
        }
    }
}
