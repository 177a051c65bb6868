use thiserror::Error;

/// Errors raised by the algebra engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at `{token}`: {message}")]
    Parse { token: String, message: String },

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("ideal is not homogeneous: {0}")]
    NotHomogeneous(String),

    #[error("ambient mismatch: expected {expected} variables, found {found}")]
    Ambient { expected: usize, found: usize },

    #[error("division by the zero polynomial")]
    ZeroDivisor,

    #[error("series has constant term {0}, expected 1")]
    ConstantTerm(String),

    #[error("genericity failure: {0}")]
    Genericity(String),

    #[error("betti table truncated: {0}")]
    Truncated(String),

    #[error("malformed filtration: {0}")]
    MalformedFiltration(String),

    #[error("unknown arrangement id `{0}`")]
    UnknownArrangement(String),

    #[error("non-linear generator `{0}`")]
    NonLinear(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(token: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            token: token.into(),
            message: message.into(),
        }
    }
}
