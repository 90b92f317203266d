use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An object violates one of its structural invariants (non-unitary gate,
    /// instrument that increases trace, ...).
    #[error("validation error: {0}")]
    Validation(String),

    #[error("argument error: {0}")]
    Argument(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("partition error: {0}")]
    Partition(String),

    #[error("cut spec error: {0}")]
    Spec(String),

    /// A forced measurement outcome has (numerically) zero probability.
    #[error("invalid conditioning: outcome {outcome} on qubit {qubit} has projection norm {norm:e}")]
    ZeroProbability { qubit: usize, outcome: u8, norm: f64 },

    #[error("branch explosion: {count} branches exceeds the exact-mode cap of {cap}; use monte_carlo mode")]
    BranchExplosion { count: u128, cap: u128 },

    #[error("map is not linear: deviation {0:e} on a random input")]
    NonLinear(f64),
}

impl Error {
    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }
}
