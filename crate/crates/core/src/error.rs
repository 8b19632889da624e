use thiserror::Error;

/// Errors raised by the linear kernels, the step functions and the run driver.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("singular {dim}x{dim} system: |det| = {det:e} below threshold {threshold:e}")]
    Singular {
        dim: usize,
        det: f64,
        threshold: f64,
    },

    #[error("fixed-point iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("stereographic chart undefined near the south pole (1 + gamma3 = {denominator:e})")]
    SouthPole { denominator: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("trajectory is empty")]
    EmptyTrajectory,

    #[error("series crosses its mean {found} times; at least 3 crossings are needed")]
    TooFewCrossings { found: usize },
}

impl Error {
    /// True for failures of the numerics (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Singular { .. } | Error::NoConvergence { .. } | Error::SouthPole { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
