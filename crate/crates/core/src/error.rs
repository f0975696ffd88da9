use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("t = {t} lies outside the domain [{a}, {b}]")]
    Domain { t: f64, a: f64, b: f64 },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("quadrature did not converge: best estimate {estimate} (error estimate {error_estimate})")]
    Convergence { estimate: f64, error_estimate: f64 },

    #[error("degenerate profile: {0}")]
    Degenerate(String),

    #[error("invalid profile: {0}")]
    Validation(String),

    #[error("invalid body: {0}")]
    Body(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("no exact section formula for this body and direction; use a Monte Carlo profile")]
    NoExactSection,
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }
}
