use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    /// Input that fails a structural check; `location` points at the offending part.
    #[error("invalid input at {location}: {message}")]
    Invalid { location: String, message: String },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub fn invalid(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Invalid {
            location: location.into(),
            message: message.into(),
        }
    }

    /// Prefixes the location of an `Invalid` error, leaving other variants alone.
    pub fn within(self, outer: &str) -> Self {
        match self {
            Error::Invalid { location, message } => Error::Invalid {
                location: format!("{outer}.{location}"),
                message,
            },
            e => e,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
