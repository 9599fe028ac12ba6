use thiserror::Error;

/// Errors raised by the library operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("weight ranks are not adjacent: SO({beta_rank}) over SO({sigma_rank})")]
    RankMismatch { beta_rank: usize, sigma_rank: usize },

    #[error("unsupported fibre representation {0:?}; expected (1) or (2)")]
    UnsupportedSigma(Vec<i64>),

    #[error("invalid K-type (n={n}, j={j}, q={q})")]
    InvalidKType { n: u32, j: i64, q: i64 },

    #[error("step leaves the admissible (j, q) range")]
    InvalidStep,

    #[error("K-types are not adjacent")]
    NotAdjacent,

    #[error("inconsistent spectrum-generating system: {0}")]
    InconsistentSystem(String),

    #[error("argument outside the domain: {0}")]
    DomainError(String),

    #[error("quadrature did not converge: estimated error {estimate:e} above {tolerance:e}")]
    QuadratureFailure { estimate: f64, tolerance: f64 },

    #[error("regular-part fit unstable: estimated error {estimate:e} above {tolerance:e}")]
    FitUnstable { estimate: f64, tolerance: f64 },

    #[error("dimension parity does not match: {0}")]
    ParityError(String),

    #[error("covector must be nonzero")]
    ZeroCovector,

    #[error("precondition violated: {0}")]
    PreconditionViolation(String),

    #[error("degenerate projective normalization at the given point")]
    Degenerate,
}

pub type Result<T> = std::result::Result<T, Error>;
