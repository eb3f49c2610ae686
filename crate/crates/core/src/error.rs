use thiserror::Error;

/// Errors raised by the core algorithms.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("the zero vector has no projective image")]
    ZeroVector,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("undefined extended arithmetic: {0}")]
    UndefinedArithmetic(&'static str),
    #[error("orbit reached an indeterminacy point at step {step}")]
    IndeterminateOrbit { step: usize },
    #[error("Tchebyshev factor T^{k}(tau) vanishes")]
    ZeroTchebyshevFactor { k: usize },
    #[error("no point satisfies the constraints")]
    NoSolution,
    #[error("root finding failed: {0}")]
    RootFindingFailure(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("point is not fixed (residual {residual:e})")]
    NotFixed { residual: f64 },
    #[error("verification failed: {what} (residual {residual:e})")]
    VerificationFailure { what: String, residual: f64 },
    #[error("point is not on J: alpha(z) does not vanish")]
    NotOnJ,
    #[error("point is not in the invariant slice M")]
    NotInM,
    #[error("level {level} exceeds the supported maximum {max}")]
    LevelTooLarge { level: u32, max: u32 },
    #[error("weights must be real for the symmetric pencil")]
    NonRealWeights,
    #[error("Schur reduction requires z0^2 != z2^2")]
    SchurPreconditionViolated,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
