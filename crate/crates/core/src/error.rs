use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// The weights of a superposition cancel (or nothing is left after coalescing).
    #[error("degenerate state: {0}")]
    DegenerateState(String),

    /// Conditioning on an outcome whose probability (density) is numerically zero.
    #[error("zero probability: conditioning density {density:e} below {threshold:e}")]
    ZeroProbability { density: f64, threshold: f64 },

    #[error("Fock truncation {required} exceeds the configured cap {cap}")]
    TruncationTooLarge { required: usize, cap: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("grid too large: {steps} steps exceeds the cap {cap}")]
    GridTooLarge { steps: usize, cap: usize },

    /// A density matrix eigenvalue fell below the roundoff floor.
    #[error("density matrix is not positive: eigenvalue {0:e}")]
    NotPositive(f64),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("numerical root does not match the closed form: {closed_form} vs {numeric} (|diff| = {diff:e})")]
    RootMismatch {
        closed_form: f64,
        numeric: f64,
        diff: f64,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
