use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::LlmError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RetryPolicy {
    /// Total attempts including the first one.
    pub max_attempts: u32,
    /// Delay before the first retry; doubles on every further retry.
    pub backoff_base_ms: u64,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        RetryPolicy { max_attempts: 3, backoff_base_ms: 500 }
    }
}

impl RetryPolicy {
    /// Delay before retry number `retry` (0-based).
    pub fn backoff(&self, retry: u32) -> Duration {
        Duration::from_millis(self.backoff_base_ms.saturating_mul(1u64 << retry.min(20)))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ModelConfig {
    /// Base URL; `/chat/completions` and `/embeddings` are appended.
    pub endpoint: String,
    pub model: String,
    pub embedding_model: String,
    /// Expected embedding width, if known in advance.
    pub embedding_dim: Option<usize>,
    pub temperature: f64,
    pub max_in_flight: usize,
    pub timeout_secs: u64,
    pub retry: RetryPolicy,
    /// Name of the environment variable holding the API key. The key itself is never
    /// stored in configuration.
    pub api_key_env: String,
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig {
            endpoint: "https://api.openai.com/v1".into(),
            model: "gpt-4".into(),
            embedding_model: "text-embedding-ada-002".into(),
            embedding_dim: None,
            temperature: 1.0,
            max_in_flight: 4,
            timeout_secs: 60,
            retry: RetryPolicy::default(),
            api_key_env: "OPENAI_API_KEY".into(),
        }
    }
}

impl ModelConfig {
    pub fn validate(&self) -> Result<(), LlmError> {
        if !(self.temperature >= 0.0) || !self.temperature.is_finite() {
            return Err(LlmError::Config(format!("temperature {} must be >= 0", self.temperature)));
        }
        if self.retry.max_attempts == 0 {
            return Err(LlmError::Config("retry.max_attempts must be >= 1".into()));
        }
        if self.max_in_flight == 0 {
            return Err(LlmError::Config("max_in_flight must be >= 1".into()));
        }
        if self.endpoint.trim().is_empty() {
            return Err(LlmError::Config("endpoint is empty".into()));
        }
        if self.embedding_dim == Some(0) {
            return Err(LlmError::Config("embedding_dim must be positive".into()));
        }
        Ok(())
    }

    pub fn from_toml(text: &str) -> Result<Self, LlmError> {
        let cfg: ModelConfig = toml::from_str(text).map_err(|e| LlmError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn chat_url(&self) -> String {
        format!("{}/chat/completions", self.endpoint.trim_end_matches('/'))
    }

    pub fn embeddings_url(&self) -> String {
        format!("{}/embeddings", self.endpoint.trim_end_matches('/'))
    }
}
