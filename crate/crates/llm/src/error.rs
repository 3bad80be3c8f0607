use thiserror::Error;

#[derive(Debug, Error)]
pub enum LlmError {
    #[error("invalid model configuration: {0}")]
    Config(String),
    #[error("missing template variables: {}", .missing.join(", "))]
    MissingPlaceholders { missing: Vec<String> },
    #[error("unknown template `{0}`")]
    UnknownTemplate(String),
    #[error("malformed template `{id}`: {detail}")]
    Template { id: String, detail: String },
    #[error("request failed after {attempts} attempt(s): {detail}")]
    Transport { attempts: u32, detail: String },
    #[error("credentials rejected or missing: {0}")]
    Credential(String),
    #[error("HTTP {status}: {body}")]
    Http { status: u16, body: String },
    #[error("malformed service response: {0}")]
    Response(String),
    #[error("integrity violation: {0}")]
    Integrity(String),
    #[error("fixture error: {0}")]
    Fixture(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
