use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument outside the mathematical domain of a function.
    #[error("domain error in {function}: {detail}")]
    Domain {
        function: &'static str,
        detail: &'static str,
    },

    /// A physical or configuration parameter failed validation.
    #[error("invalid parameter `{name}`: {detail}")]
    InvalidParameter {
        name: &'static str,
        detail: &'static str,
    },

    #[error("quadrature did not converge after {subdivisions} subdivisions (estimate {estimate:e}, error {error:e})")]
    NonConvergence {
        subdivisions: usize,
        estimate: f64,
        error: f64,
    },

    /// Path gain evaluated at zero separation with no singularity buffer.
    #[error("path gain is singular at zero distance when epsilon = 0")]
    Singularity,

    /// Zero noise and zero weighted interference.
    #[error("SINR undefined: noise and weighted interference are both zero")]
    DegenerateSinr,

    /// Infinite-network interference diverges for eta <= 2.
    #[error("infinite-network interference diverges for path-loss exponent {eta} <= 2")]
    Divergence { eta: f64 },

    #[error("division by zero: {0}")]
    DivisionByZero(&'static str),

    #[error("unsupported: {0}")]
    Unsupported(&'static str),
}

impl Error {
    pub(crate) fn domain(function: &'static str, detail: &'static str) -> Self {
        Error::Domain { function, detail }
    }

    pub(crate) fn param(name: &'static str, detail: &'static str) -> Self {
        Error::InvalidParameter { name, detail }
    }
}
