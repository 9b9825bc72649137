use std::fmt;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A precondition on the inputs was violated. The message names it.
    Domain(String),
    /// The operation is undefined at the critical premium rate c = c*.
    CriticalRate { c: f64 },
    /// Adaptive quadrature hit its panel budget before reaching the target.
    QuadratureNonConvergence { achieved: f64, requested: f64 },
    /// A truncated series needed more terms than the hard cap allows.
    TruncationBound { needed: usize, cap: usize },
    /// No sign change for the capital equation over the search bracket.
    NoBracket { alpha: f64, attainable_max: f64, attainable_min: f64 },
    /// A law specification could not be parsed or has invalid parameters.
    InvalidLaw(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::CriticalRate { c } => {
                write!(f, "undefined at the critical premium rate c = c* = {c}")
            }
            Error::QuadratureNonConvergence { achieved, requested } => write!(
                f,
                "quadrature did not converge: achieved tolerance {achieved:.3e}, requested {requested:.3e}"
            ),
            Error::TruncationBound { needed, cap } => {
                write!(f, "series truncation bound exceeded: needed {needed} terms, cap {cap}")
            }
            Error::NoBracket { alpha, attainable_max, attainable_min } => write!(
                f,
                "no bracket: alpha = {alpha} outside attainable range [{attainable_min:.3e}, {attainable_max:.6}]"
            ),
            Error::InvalidLaw(msg) => write!(f, "invalid law: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
