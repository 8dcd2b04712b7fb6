use serde::Serialize;

/// Errors shared across the workspace.
///
/// Every variant maps to a stable machine-readable code so that front-ends
/// can report failures as structured objects.
#[derive(Debug, Clone, PartialEq, thiserror::Error, Serialize)]
#[serde(tag = "code", content = "detail", rename_all = "snake_case")]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParam { name: String, reason: String },
    #[error("infeasible size for {what}: {size} exceeds limit {limit}")]
    Infeasible {
        what: String,
        size: usize,
        limit: usize,
    },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("empty input: {0}")]
    Empty(String),
    #[error("overlapping inputs: {0}")]
    Overlap(String),
    #[error("non-positive data: {0}")]
    NonPositive(String),
}

impl Error {
    pub fn param(name: &str, reason: impl Into<String>) -> Self {
        Error::InvalidParam {
            name: name.to_string(),
            reason: reason.into(),
        }
    }

    pub fn infeasible(what: &str, size: usize, limit: usize) -> Self {
        Error::Infeasible {
            what: what.to_string(),
            size,
            limit,
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidParam { .. } => "invalid_param",
            Error::Infeasible { .. } => "infeasible",
            Error::InvalidConfig(_) => "invalid_config",
            Error::Empty(_) => "empty",
            Error::Overlap(_) => "overlap",
            Error::NonPositive(_) => "non_positive",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
