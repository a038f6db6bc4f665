use thiserror::Error;

/// Errors produced by the simulator, samplers, oracles and experiment runner.
#[derive(Debug, Error)]
pub enum Error {
    /// The requested statevector does not fit under the configured qubit cap.
    #[error(
        "cannot allocate {n} qubits: 2^{n} amplitudes need {bytes} bytes (limit is {max} qubits)"
    )]
    Capacity { n: usize, max: usize, bytes: u128 },

    /// An argument is outside the operation's domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A qubit index does not address a valid neighbouring pair.
    #[error("qubit pair ({q}, {}) out of range for {n} qubits", q + 1)]
    QubitOutOfRange { q: usize, n: usize },

    /// A gate matrix of the wrong size.
    #[error("expected a {expected}x{expected} gate, got {got}x{got}")]
    GateDimension { expected: usize, got: usize },

    /// Malformed experiment configuration.
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Self::InvalidArgument(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
