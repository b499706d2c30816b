use thiserror::Error;

/// Errors raised by the library. Every variant is a validation failure of
/// caller input except `CatalysisFailed`, which signals a regression.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("energy spectrum is empty")]
    EmptySpectrum,

    #[error("energy {0} is not finite")]
    NonFiniteEnergy(f64),

    #[error("inverse temperature must be non-negative, got {0}")]
    NegativeBeta(f64),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid probability vector: {0}")]
    InvalidState(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("argument {0} lies outside [0, 1]")]
    OutOfRange(f64),

    #[error("dimension {0} is too large for full cone enumeration (at most 8)")]
    DimensionTooLarge(usize),

    #[error("operation requires a two-qubit context with energies (0, E, E, 2E)")]
    NotTwoQubit,

    #[error("energy gap must be positive, got {0}")]
    NonPositiveGap(f64),

    #[error("arguments outside the real-root domain: {0}")]
    RootDomain(String),

    #[error("volume of ENT_CONE requires an origin state")]
    MissingOrigin,

    #[error("sample count must be positive")]
    ZeroSamples,

    #[error("degenerate point cloud: {0}")]
    DegenerateCloud(String),

    #[error("empty or invalid range [{0}, {1}]")]
    EmptyRange(f64, f64),

    #[error("thermal mode tail mass {tail:.3e} exceeds 1e-8 at n_max = {n_max}; use n_max >= {suggested}")]
    TruncationTail { tail: f64, n_max: usize, suggested: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid level pair ({0}, {1})")]
    InvalidPair(usize, usize),

    #[error("search budget must be positive")]
    ZeroBudget,

    #[error("matrix is not a valid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("catalysis check failed: {0}")]
    CatalysisFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
