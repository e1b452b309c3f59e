use thiserror::Error;

/// Error type shared by every module in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension must be an integer >= 2, got {0}")]
    DimensionTooSmall(usize),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("concentration must be positive and finite, got {0}")]
    InvalidConcentration(f64),

    #[error("Bessel order must be nonnegative and finite, got {0}")]
    InvalidOrder(f64),

    #[error("argument must be nonnegative and finite, got {0}")]
    InvalidArgument(f64),

    #[error("direction vector is invalid: {0}")]
    InvalidDirection(String),

    #[error("log_gamma requires a positive finite argument, got {0}")]
    InvalidGammaArgument(f64),

    #[error("Renyi order must lie in (0,1) or (1,inf), got {0} (use kl for the order-1 limit)")]
    InvalidRenyiOrder(f64),

    #[error("half-integer Bessel oracle requires 2*nu to be an odd integer, got nu = {0}")]
    NotHalfInteger(f64),

    #[error("finite-difference step is invalid: {0}")]
    InvalidStep(String),

    #[error("Monte Carlo estimate requires at least {min} samples, got {got}")]
    TooFewSamples { min: u64, got: u64 },

    #[error("Hankel circular-variance expansion requires kappa >= {threshold} for nu = {nu}, got kappa = {kappa}")]
    BelowExpansionThreshold { nu: f64, kappa: f64, threshold: f64 },

    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
