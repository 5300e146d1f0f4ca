use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A parameter set or configuration failed validation.
    #[error("invalid parameter: {0}")]
    Validation(String),

    /// Quadrature did not reach the requested tolerance; carries the best estimate.
    #[error(
        "accuracy error: {context}: best estimate {value:e} with error estimate {error_estimate:e} after {evaluations} evaluations"
    )]
    Accuracy {
        context: String,
        value: f64,
        error_estimate: f64,
        evaluations: usize,
    },

    /// The integrand overflowed or produced NaN at an evaluation point.
    #[error("non-finite integrand: {context} at {at:e}")]
    NonFinite { context: String, at: f64 },

    #[error("covariance factorization failed after jitter {jitter:e}: smallest eigenvalue estimate {min_eigenvalue:e}")]
    Conditioning { jitter: f64, min_eigenvalue: f64 },

    /// The requested operation is outside the parameter regime where it is defined.
    #[error("regime error: {0}")]
    Regime(String),

    #[error("data error: {0}")]
    Data(String),

    #[error("covariance entry ({i}, {j}): {source}")]
    MatrixEntry {
        i: usize,
        j: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// True for failures caused by numerics rather than by the caller's input.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::Accuracy { .. } | Error::NonFinite { .. } | Error::Conditioning { .. } => true,
            Error::MatrixEntry { source, .. } => source.is_numerical(),
            _ => false,
        }
    }

    pub(crate) fn with_context(self, ctx: &str) -> Error {
        match self {
            Error::Accuracy {
                context,
                value,
                error_estimate,
                evaluations,
            } => Error::Accuracy {
                context: format!("{ctx}: {context}"),
                value,
                error_estimate,
                evaluations,
            },
            Error::NonFinite { context, at } => Error::NonFinite {
                context: format!("{ctx}: {context}"),
                at,
            },
            other => other,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
