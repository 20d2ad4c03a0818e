use thiserror::Error;

/// Errors produced by model construction and capacity evaluation.
#[derive(Debug, Error)]
pub enum Error {
    /// Matrix violates the Hermiticity (or real-trace) requirement.
    #[error("matrix is not Hermitian: {0}")]
    NotHermitian(String),

    /// Spectrum does not describe a density matrix.
    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    /// Probability argument outside [0, 1].
    #[error("probability {0} outside [0, 1]")]
    ProbabilityOutOfRange(f64),

    /// Ansatz angle outside [0, pi/4].
    #[error("angle {0} outside [0, pi/4]")]
    ThetaOutOfRange(f64),

    /// Entanglement budget must be nonnegative.
    #[error("entanglement budget must be nonnegative, got {0}")]
    NegativeBudget(f64),

    /// Input state fails the density-matrix checks.
    #[error("not a valid density matrix: {0}")]
    InvalidDensityMatrix(String),

    /// Bath too large for 2^N enumeration.
    #[error("bath size {n} exceeds the brute-force limit of {max} spins (2^N enumeration)")]
    BathTooLarge { n: usize, max: usize },

    /// Zero coupling: the channel is noiseless and has no recurrence period.
    #[error("coupling g = 0 gives a noiseless channel with no recurrence period")]
    NoDephasing,

    /// Model parameters are inconsistent or out of range.
    #[error("invalid model: {0}")]
    InvalidModel(String),

    /// Time argument must be finite and nonnegative.
    #[error("time must be finite and nonnegative, got {0}")]
    InvalidTime(f64),

    /// Ensemble configuration is inconsistent.
    #[error("invalid ensemble config: {0}")]
    InvalidEnsemble(String),

    /// A value that must be finite was NaN or infinite.
    #[error("non-finite value encountered: {0}")]
    NonFinite(String),
}

pub type Result<T> = std::result::Result<T, Error>;
