use thiserror::Error;

/// Errors produced by the discgeom operations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("walk operator is not stochastic: c = {c} < delta = {delta}")]
    NotStochastic { c: f64, delta: f64 },

    #[error("exhaustive search over {n} vertices exceeds the limit of {max}")]
    TooLarge { n: usize, max: usize },

    #[error("eigensolver did not converge on a {n}x{n} matrix within {max_iterations} iterations")]
    EigenNonConvergence { n: usize, max_iterations: usize },

    #[error("singular system: {0}")]
    Singular(String),
}

impl Error {
    /// True for failures of a numerical routine, as opposed to invalid input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::EigenNonConvergence { .. } | Error::Singular(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
