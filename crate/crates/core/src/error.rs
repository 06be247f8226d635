use thiserror::Error;

/// Error type shared by all solver operations.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Operands with incompatible dimensions.
    #[error("dimension mismatch in {context}: expected {expected}, got {actual}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        actual: usize,
    },

    /// A precondition on the arguments was violated.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The operator or geometry does not support the requested operation.
    #[error("{operation} unsupported: {detail}")]
    UnsupportedCapability {
        operation: &'static str,
        detail: String,
    },

    /// An iterative procedure hit its iteration cap.
    #[error("{what} did not converge within {iterations} iterations (last value {last:e})")]
    NotConverged {
        what: &'static str,
        iterations: usize,
        last: f64,
    },

    /// A NaN or infinity escaped from an operation that promises finite output.
    #[error("non-finite value produced in {0}")]
    NonFinite(&'static str),

    /// A violated internal invariant (indicates corrupted operator data).
    #[error("internal consistency violation: {0}")]
    Internal(String),

    /// An inner solve failed inside the iteration loop.
    #[error("solver step {iteration} failed: {source}")]
    StepFailed {
        iteration: usize,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn at_step(self, iteration: usize) -> Error {
        Error::StepFailed {
            iteration,
            source: Box::new(self),
        }
    }
}
