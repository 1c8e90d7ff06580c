use thiserror::Error;

/// Errors raised anywhere in the amplitude pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("series did not reach relative tolerance {rel_tol:e} within {max_terms} terms")]
    NonConvergent { max_terms: usize, rel_tol: f64 },

    #[error("1F1 lower parameter b = {b} is a non-positive integer")]
    PoleAtB { b: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error(
        "saddle-point Newton iteration did not converge after {iterations} iterations (|g| = {residual:e})"
    )]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("saddle point converged to Im(t_s) = {im} <= 0 from both seeds")]
    WrongBranch { im: f64 },

    #[error("degenerate time interval: t'' coincides with t_s")]
    DegenerateInterval,

    #[error("S_V''(t_s) vanishes; the chosen burst sits on a field node")]
    ZeroCurvature,

    #[error("quadrature failed: {0}")]
    QuadratureFailure(String),

    #[error("Hankel-integral tail bound {bound:e} exceeds 1e-13")]
    TailBoundExceeded { bound: f64 },

    #[error("trajectory passes through the origin at xi = {xi}")]
    ZeroTrajectory { xi: f64 },

    #[error("xi quadrature unconverged: doubling the node count moved the result by {rel_change:e}")]
    QuadratureUnconverged { rel_change: f64 },

    #[error("inconsistent channel: {0}")]
    InconsistentChannel(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Short machine-readable tag used in NaN rows of a scan.
    pub fn tag(&self) -> &'static str {
        match self {
            Error::NonConvergent { .. } => "non-convergent",
            Error::PoleAtB { .. } => "pole-at-b",
            Error::Domain(_) => "domain",
            Error::NoConvergence { .. } => "no-convergence",
            Error::WrongBranch { .. } => "wrong-branch",
            Error::DegenerateInterval => "degenerate-interval",
            Error::ZeroCurvature => "zero-curvature",
            Error::QuadratureFailure(_) => "quadrature-failure",
            Error::TailBoundExceeded { .. } => "tail-bound-exceeded",
            Error::ZeroTrajectory { .. } => "zero-trajectory",
            Error::QuadratureUnconverged { .. } => "quadrature-unconverged",
            Error::InconsistentChannel(_) => "inconsistent-channel",
            Error::Config(_) => "config",
            Error::Io(_) => "io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
