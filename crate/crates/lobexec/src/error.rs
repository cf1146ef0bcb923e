use thiserror::Error;

/// Errors surfaced by the analytic and simulation layers.
///
/// The CLI maps these onto process exit codes: parameter/usage problems
/// exit with 2, numeric failures with 3.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{field}`: {message}")]
    Parameter { field: String, message: String },

    #[error("{context}: did not converge within {limit} {unit} (partial value {partial:e})")]
    Convergence {
        context: String,
        limit: usize,
        unit: &'static str,
        partial: f64,
    },

    #[error("one-sided derivative estimate diverges (non-analytic at 0+)")]
    DivergingDerivative,

    #[error("degenerate transition kernel: B = {b:e} is not positive")]
    DegenerateKernel { b: f64 },

    #[error("insufficient data: need at least {needed} samples, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("usage error: {0}")]
    Usage(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn parameter(field: &str, message: impl Into<String>) -> Self {
        Error::Parameter {
            field: field.to_string(),
            message: message.into(),
        }
    }

    /// Exit code the CLI should use for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parameter { .. } | Error::Usage(_) | Error::Io { .. } => 2,
            Error::Convergence { .. }
            | Error::DivergingDerivative
            | Error::DegenerateKernel { .. }
            | Error::InsufficientData { .. } => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
