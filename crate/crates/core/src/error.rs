use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("semiclassical parameter mismatch: {left} vs {right}")]
    ParameterMismatch { left: f64, right: f64 },

    #[error("operator {op} cannot act on a {operand}")]
    ShapeMismatch { op: &'static str, operand: &'static str },

    #[error("argument {t} lies within the exclusion radius of the pole at {pole}")]
    PoleProximity { t: f64, pole: f64 },

    #[error("truncation {dim} too small for support {support} (need at least {required})")]
    TruncationTooSmall { dim: usize, support: usize, required: usize },

    #[error("implicit midpoint Newton iteration did not converge; reached t = {t}")]
    NewtonDivergence { t: f64 },

    #[error("trajectory escaped at t = {t}")]
    Escaped { t: f64 },

    #[error("symbol {0} has no exact quantization in this crate")]
    UnsupportedSymbol(String),

    #[error("{excluded} of {total} grid points could not be transported")]
    TooManyExclusions { excluded: usize, total: usize },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// True for failures of a numerical procedure (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::PoleProximity { .. }
                | Error::NewtonDivergence { .. }
                | Error::Escaped { .. }
                | Error::TooManyExclusions { .. }
        )
    }
}
