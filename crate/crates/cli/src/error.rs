use thiserror::Error;

/// Anything that makes a command unable to produce a verdict (exit code 2).
#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read or write {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed JSON in {path}: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] vcsp_core::Error),
}

pub type Result<T> = std::result::Result<T, CliError>;
