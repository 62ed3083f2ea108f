use thiserror::Error;

/// Errors raised by the evaluation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GreenError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("point lies on the interface x2 = 0: {0}")]
    Interface(String),

    #[error("coincident field and source points (|x - y| = {0:e})")]
    Coincident(f64),

    #[error("Gamma function pole at {0}")]
    Pole(f64),

    #[error("direction {0} is a lateral direction (theta in {{0, pi}})")]
    LateralDirection(f64),

    #[error("critical angle undefined for equal wavenumbers")]
    NoCriticalAngle,

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("strip violation: |Im s| = {im:e} not below {limit:e}")]
    Strip { im: f64, limit: f64 },

    #[error("quadrature did not converge: error estimate {estimate:e} above tolerance {tolerance:e}")]
    Convergence { estimate: f64, tolerance: f64 },

    #[error("accuracy not guaranteed: {0}")]
    Accuracy(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("output error: {0}")]
    Io(String),
}

impl GreenError {
    /// Process exit code used by the command line front-end.
    pub fn exit_code(&self) -> i32 {
        match self {
            GreenError::Convergence { .. } | GreenError::Accuracy(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, GreenError>;
