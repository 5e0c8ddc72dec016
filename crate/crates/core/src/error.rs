use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    /// A named convergence or integrability condition does not hold.
    #[error("convergence guard `{guard}` violated: {detail}")]
    Guard { guard: &'static str, detail: String },

    #[error("overflow: {0}")]
    Overflow(String),

    /// Alternating summation lost (almost) all significant digits.
    #[error("precision failure: cancellation ratio {ratio:.3e} exceeds limit {limit:.1e}")]
    Precision { ratio: f64, limit: f64 },

    #[error(
        "tolerance {tol:.3e} not reached within {budget} terms (achieved bound {achieved:.3e})"
    )]
    TermBudget {
        tol: f64,
        achieved: f64,
        budget: usize,
    },

    #[error("quadrature did not converge after {levels} levels (estimate {value:.6e}, error {error:.3e})")]
    NoConvergence {
        levels: usize,
        value: f64,
        error: f64,
    },

    #[error("endpoint singularity stronger than declared: {0}")]
    Singularity(String),

    #[error("divergent: {0}")]
    Divergent(String),

    #[error("imaginary residual {residual:.3e} exceeds tolerance {tol:.3e}")]
    ImaginaryResidual { residual: f64, tol: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    pub(crate) fn guard(guard: &'static str, detail: impl Into<String>) -> Self {
        Error::Guard {
            guard,
            detail: detail.into(),
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    /// True for errors caused by the caller's parameters rather than by the
    /// numerics (guard and domain violations).
    pub fn is_parameter_error(&self) -> bool {
        matches!(
            self,
            Error::Domain(_) | Error::Guard { .. } | Error::InvalidParameter(_)
        )
    }
}
