use thiserror::Error;

pub type CoreResult<T> = Result<T, CoreError>;

#[derive(Debug, Error)]
pub enum CoreError {
    #[error("empty point set")]
    EmptySet,

    #[error("point does not belong to {space}: {detail}")]
    SpaceMismatch { space: String, detail: String },

    #[error("{space} does not support {op}")]
    Unsupported { space: String, op: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("malformed word: {0}")]
    MalformedWord(String),

    #[error("regularity oracle refused: {0}")]
    OracleRefused(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

impl CoreError {
    pub fn mismatch(space: &str, detail: impl Into<String>) -> Self {
        CoreError::SpaceMismatch {
            space: space.to_string(),
            detail: detail.into(),
        }
    }

    pub fn unsupported(space: &str, op: &str) -> Self {
        CoreError::Unsupported {
            space: space.to_string(),
            op: op.to_string(),
        }
    }
}
