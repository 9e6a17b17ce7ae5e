use thiserror::Error;

/// Errors raised by the analysis, quadrature and simulation routines.
///
/// Numeric payloads are widened to `f64` so the type is not generic.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error in {function}: {detail}")]
    Domain { function: &'static str, detail: String },

    #[error("invalid parameter `{name}`: {detail}")]
    InvalidParameter { name: &'static str, detail: String },

    #[error(
        "quadrature did not converge after {subdivisions} subdivisions \
         (partial estimate {estimate:e}, error bound {error:e})"
    )]
    Convergence {
        estimate: f64,
        error: f64,
        subdivisions: usize,
    },

    #[error("root not bracketed: difference keeps one sign on [{lo:e}, {hi:e}]")]
    Bracket { lo: f64, hi: f64 },

    #[error("configuration error: {0}")]
    Configuration(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(function: &'static str, detail: impl Into<String>) -> Error {
    Error::Domain {
        function,
        detail: detail.into(),
    }
}

pub(crate) fn invalid(name: &'static str, detail: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        detail: detail.into(),
    }
}
