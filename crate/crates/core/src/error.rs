use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),

    /// A pointwise field value left the admissible set of the model.
    #[error("state not admissible at x = {x}: field values {values:?}")]
    Admissibility { x: f64, values: Vec<f64> },

    #[error("singular linear system: {0}")]
    SingularMatrix(String),

    #[error(
        "Newton iteration failed after {iterations} iterations \
         (residual norm {residual_norm:e}): {reason}"
    )]
    NewtonDivergence {
        iterations: usize,
        residual_norm: f64,
        reason: String,
        /// Residual 2-norm after each accepted iterate, starting with the guess.
        trace: Vec<f64>,
    },

    #[error("I/O error: {0}")]
    Io(String),

    #[error("malformed ledger: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn argument(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub fn is_admissibility(&self) -> bool {
        matches!(self, Error::Admissibility { .. })
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
