use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),

    #[error("{what} has size above the configured bound {bound}")]
    BoundExceeded { what: &'static str, bound: usize },

    #[error("not nested: {0}")]
    NotNested(String),

    #[error("subgroups belong to different parent groups")]
    ParentMismatch,

    #[error("not normal: {0}")]
    NotNormal(String),

    #[error("not Galois: {0}")]
    NotGalois(String),

    #[error("not galtourable: {0}")]
    NotGaltourable(String),

    #[error("invalid tower: {0}")]
    InvalidTower(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("unknown field {0:?}")]
    UnknownField(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// An internal consistency check failed. This always indicates a bug,
    /// never bad input.
    #[error("internal theorem violation: {0}")]
    TheoremViolation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::TheoremViolation(_))
    }
}
