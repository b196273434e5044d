use thiserror::Error;

/// Failure modes shared by every module.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("pole at {re} + {im}i")]
    Pole { re: f64, im: f64 },

    #[error("no convergence in {what}: best estimate {estimate}, error estimate {error}")]
    NonConvergence {
        what: String,
        estimate: f64,
        error: f64,
    },

    #[error("function nearly vanishes on the contour at {re} + {im}i")]
    ContourProximity { re: f64, im: f64 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("series does not converge absolutely at Re s = {sigma} (abscissa {abscissa})")]
    BelowAbscissa { sigma: f64, abscissa: f64 },

    #[error("series is not in the decaying class: {0}")]
    ClassMembership(String),

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("conjugate point at r = {r}")]
    ConjugatePoint { r: f64 },

    #[error("grid too coarse: {0}")]
    Refinement(String),

    #[error("ill-conditioned system (condition number {condition:e})")]
    Conditioning { condition: f64 },

    #[error("pointwise evaluation needs alpha > -1 (got effective index {index}); use the pairing")]
    Mode { index: f64 },

    #[error("unsupported dimension d = {0}")]
    UnsupportedDimension(usize),

    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    #[error("not a number produced in {0}")]
    NotANumber(String),

    #[error("io: {0}")]
    Io(String),

    #[error("parse: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
