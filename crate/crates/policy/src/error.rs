use thiserror::Error;

#[derive(Debug, Error)]
pub enum PolicyError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("non-finite value at batch row {index}: {detail}")]
    Numeric { index: usize, detail: String },
    #[error("embedding failed: {0}")]
    Embedding(String),
    #[error("malformed file: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
