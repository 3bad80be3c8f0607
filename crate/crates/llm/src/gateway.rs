//! Chat-completion and embedding calls with retries and an in-flight cap.

use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};
use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::config::ModelConfig;
use crate::error::LlmError;
use crate::limiter::InFlightLimiter;
use crate::reply::{ReplyFormat, StructuredReply};
use crate::transport::{
    FixtureStore, HttpRequest, HttpResponse, HttpTransport, RecordingTransport, ReplayTransport,
    Transport, TransportFailure,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChatMessage {
    pub role: String,
    pub content: String,
}

impl ChatMessage {
    pub fn system(content: impl Into<String>) -> Self {
        ChatMessage { role: "system".into(), content: content.into() }
    }

    pub fn user(content: impl Into<String>) -> Self {
        ChatMessage { role: "user".into(), content: content.into() }
    }
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenUsage {
    pub prompt_tokens: u64,
    pub completion_tokens: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChatReply {
    pub reply: StructuredReply,
    /// Attempts beyond the first.
    pub retries: u32,
    pub usage: Option<TokenUsage>,
}

type Sleeper = Arc<dyn Fn(Duration) + Send + Sync>;

pub struct Gateway {
    cfg: ModelConfig,
    transport: Arc<dyn Transport>,
    limiter: InFlightLimiter,
    sleeper: Sleeper,
    embedding_dim: Mutex<Option<usize>>,
    prompt_tokens: AtomicU64,
    completion_tokens: AtomicU64,
}

impl Gateway {
    pub fn new(cfg: ModelConfig, transport: Arc<dyn Transport>) -> Result<Self, LlmError> {
        cfg.validate()?;
        Ok(Gateway {
            limiter: InFlightLimiter::new(cfg.max_in_flight),
            embedding_dim: Mutex::new(cfg.embedding_dim),
            cfg,
            transport,
            sleeper: Arc::new(std::thread::sleep),
            prompt_tokens: AtomicU64::new(0),
            completion_tokens: AtomicU64::new(0),
        })
    }

    /// Live HTTP access.
    pub fn http(cfg: ModelConfig) -> Result<Self, LlmError> {
        let t = HttpTransport::new(Duration::from_secs(cfg.timeout_secs))?;
        Self::new(cfg, Arc::new(t))
    }

    /// Offline access from recorded fixtures only.
    pub fn replay(cfg: ModelConfig, fixtures: &Path) -> Result<Self, LlmError> {
        Self::new(cfg, Arc::new(ReplayTransport::from_file(fixtures)?))
    }

    /// Live access that records every exchange into `fixtures` (call
    /// [`RecordingTransport::flush`] on the returned handle to write the file).
    pub fn recording(
        cfg: ModelConfig,
        fixtures: &Path,
    ) -> Result<(Self, Arc<RecordingTransport>), LlmError> {
        let inner = Arc::new(HttpTransport::new(Duration::from_secs(cfg.timeout_secs))?);
        let rec = Arc::new(RecordingTransport::new(
            inner,
            FixtureStore::load_or_default(fixtures)?,
            Some(fixtures.to_path_buf()),
        ));
        Ok((Self::new(cfg, rec.clone())?, rec))
    }

    /// Replaces the backoff sleep (tests use a recorder instead of real sleeping).
    pub fn with_sleeper(mut self, sleeper: impl Fn(Duration) + Send + Sync + 'static) -> Self {
        self.sleeper = Arc::new(sleeper);
        self
    }

    pub fn config(&self) -> &ModelConfig {
        &self.cfg
    }

    pub fn limiter(&self) -> &InFlightLimiter {
        &self.limiter
    }

    /// Embedding width seen so far (or configured).
    pub fn embedding_dim(&self) -> Option<usize> {
        *self.embedding_dim.lock().unwrap_or_else(|e| e.into_inner())
    }

    pub fn token_totals(&self) -> TokenUsage {
        TokenUsage {
            prompt_tokens: self.prompt_tokens.load(Ordering::Relaxed),
            completion_tokens: self.completion_tokens.load(Ordering::Relaxed),
        }
    }

    fn api_key(&self) -> Result<Option<String>, LlmError> {
        if !self.transport.needs_credentials() {
            return Ok(None);
        }
        match std::env::var(&self.cfg.api_key_env) {
            Ok(k) if !k.is_empty() => Ok(Some(k)),
            _ => Err(LlmError::Credential(format!(
                "environment variable {} is not set",
                self.cfg.api_key_env
            ))),
        }
    }

    fn post(&self, req: &HttpRequest) -> Result<(HttpResponse, u32), LlmError> {
        let key = self.api_key()?;
        let attempts = self.cfg.retry.max_attempts;
        let mut last = String::new();
        for attempt in 0..attempts {
            let result = {
                let _permit = self.limiter.acquire();
                self.transport.post(req, key.as_deref())
            };
            match result {
                Ok(resp) if (200..300).contains(&resp.status) => return Ok((resp, attempt)),
                Ok(resp) if resp.status == 401 || resp.status == 403 => {
                    return Err(LlmError::Credential(format!("HTTP {}", resp.status)));
                }
                Ok(resp) if resp.status == 429 || resp.status >= 500 => {
                    last = format!("HTTP {}", resp.status);
                }
                Ok(resp) => return Err(LlmError::Http { status: resp.status, body: resp.body }),
                Err(TransportFailure::Retryable(e)) => last = e,
                Err(TransportFailure::Fatal(e)) => return Err(e),
            }
            log::warn!("request to {} failed ({last}), attempt {}/{attempts}", req.url, attempt + 1);
            if attempt + 1 < attempts {
                (self.sleeper)(self.cfg.retry.backoff(attempt));
            }
        }
        Err(LlmError::Transport { attempts, detail: last })
    }

    pub fn chat_request(&self, messages: &[ChatMessage]) -> HttpRequest {
        HttpRequest {
            url: self.cfg.chat_url(),
            body: json!({
                "model": self.cfg.model,
                "messages": messages,
                "temperature": self.cfg.temperature,
            }),
        }
    }

    /// Sends the conversation and parses the answer as `format`. A reply that does not
    /// match the format is returned with its parse error set, not as an `Err`.
    pub fn chat(&self, messages: &[ChatMessage], format: ReplyFormat) -> Result<ChatReply, LlmError> {
        let (resp, retries) = self.post(&self.chat_request(messages))?;
        let v: Value = serde_json::from_str(&resp.body)
            .map_err(|e| LlmError::Response(format!("chat body: {e}")))?;
        let content = v
            .pointer("/choices/0/message/content")
            .and_then(Value::as_str)
            .ok_or_else(|| LlmError::Response("chat body has no message content".into()))?;
        let usage = v.get("usage").and_then(|u| {
            Some(TokenUsage {
                prompt_tokens: u.get("prompt_tokens")?.as_u64()?,
                completion_tokens: u.get("completion_tokens")?.as_u64()?,
            })
        });
        if let Some(u) = usage {
            self.prompt_tokens.fetch_add(u.prompt_tokens, Ordering::Relaxed);
            self.completion_tokens.fetch_add(u.completion_tokens, Ordering::Relaxed);
        }
        Ok(ChatReply { reply: StructuredReply::parse(content, format), retries, usage })
    }

    pub fn embed_request(&self, texts: &[String]) -> HttpRequest {
        HttpRequest {
            url: self.cfg.embeddings_url(),
            body: json!({ "model": self.cfg.embedding_model, "input": texts }),
        }
    }

    /// One vector per text. Every vector must have the model's width; the first
    /// successful call fixes it when the configuration does not.
    pub fn embed(&self, texts: &[String]) -> Result<Vec<Vec<f64>>, LlmError> {
        if texts.is_empty() {
            return Ok(Vec::new());
        }
        let (resp, _) = self.post(&self.embed_request(texts))?;
        let v: Value = serde_json::from_str(&resp.body)
            .map_err(|e| LlmError::Response(format!("embedding body: {e}")))?;
        let data = v
            .get("data")
            .and_then(Value::as_array)
            .ok_or_else(|| LlmError::Response("embedding body has no data".into()))?;
        let mut rows: Vec<(u64, Vec<f64>)> = Vec::with_capacity(data.len());
        for (i, d) in data.iter().enumerate() {
            let index = d.get("index").and_then(Value::as_u64).unwrap_or(i as u64);
            let vec = d
                .get("embedding")
                .and_then(Value::as_array)
                .ok_or_else(|| LlmError::Response(format!("item {i} has no embedding")))?
                .iter()
                .map(|x| x.as_f64().ok_or_else(|| LlmError::Response(format!("item {i} is not numeric"))))
                .collect::<Result<Vec<f64>, _>>()?;
            rows.push((index, vec));
        }
        rows.sort_by_key(|(i, _)| *i);
        if rows.len() != texts.len() || rows.iter().enumerate().any(|(i, (j, _))| *j != i as u64) {
            return Err(LlmError::Integrity(format!(
                "asked for {} embeddings, got {}",
                texts.len(),
                rows.len()
            )));
        }
        let mut dim = self.embedding_dim.lock().unwrap_or_else(|e| e.into_inner());
        let expected = dim.unwrap_or(rows[0].1.len());
        if let Some((i, (_, v))) = rows.iter().enumerate().find(|(_, (_, v))| v.len() != expected) {
            return Err(LlmError::Integrity(format!(
                "embedding {i} has dimension {}, expected {expected}",
                v.len()
            )));
        }
        *dim = Some(expected);
        Ok(rows.into_iter().map(|(_, v)| v).collect())
    }
}
