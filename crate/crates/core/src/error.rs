use thiserror::Error;

/// Errors produced by law evaluation, scenario validation and simulation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// A structurally invalid input (inconsistent scenario, empty stream, bad sizes).
    #[error("invalid input: {0}")]
    Validation(String),

    /// A series, continued fraction or inversion grid did not reach its tolerance.
    #[error("{law}: {detail} (achieved bound {achieved:e})")]
    Computation {
        law: String,
        detail: String,
        achieved: f64,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn computation(law: impl Into<String>, detail: impl Into<String>, achieved: f64) -> Self {
        Error::Computation {
            law: law.into(),
            detail: detail.into(),
            achieved,
        }
    }

    /// Re-labels a computation error with the law that was being evaluated.
    pub fn in_law(self, law: impl Into<String>) -> Self {
        match self {
            Error::Computation { detail, achieved, law: inner } => Error::Computation {
                law: law.into(),
                detail: format!("{inner}: {detail}"),
                achieved,
            },
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
