//! HTTP transport, and record/replay of request transcripts.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};
use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::LlmError;

#[derive(Clone, Debug, PartialEq)]
pub struct HttpRequest {
    pub url: String,
    pub body: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HttpResponse {
    pub status: u16,
    pub body: String,
}

#[derive(Debug)]
pub enum TransportFailure {
    /// Connection or timeout problems; worth retrying.
    Retryable(String),
    /// Will not succeed on retry.
    Fatal(LlmError),
}

pub trait Transport: Send + Sync {
    fn post(&self, req: &HttpRequest, api_key: Option<&str>) -> Result<HttpResponse, TransportFailure>;

    /// Whether requests need an API key at all (recorded fixtures do not).
    fn needs_credentials(&self) -> bool {
        true
    }
}

pub struct HttpTransport {
    client: reqwest::blocking::Client,
}

impl HttpTransport {
    pub fn new(timeout: Duration) -> Result<Self, LlmError> {
        let client = reqwest::blocking::Client::builder()
            .timeout(timeout)
            .build()
            .map_err(|e| LlmError::Config(format!("HTTP client: {e}")))?;
        Ok(HttpTransport { client })
    }
}

impl Transport for HttpTransport {
    fn post(&self, req: &HttpRequest, api_key: Option<&str>) -> Result<HttpResponse, TransportFailure> {
        let mut builder = self.client.post(&req.url).json(&req.body);
        if let Some(key) = api_key {
            builder = builder.bearer_auth(key);
        }
        let resp = builder.send().map_err(|e| TransportFailure::Retryable(e.to_string()))?;
        let status = resp.status().as_u16();
        let body = resp.text().map_err(|e| TransportFailure::Retryable(e.to_string()))?;
        Ok(HttpResponse { status, body })
    }
}

pub const FIXTURE_FORMAT: &str = "onuw-llm-fixtures/1";

/// Lookup key of a request: SHA-256 over the URL and the canonical JSON body.
pub fn request_key(req: &HttpRequest) -> String {
    let mut h = Sha256::new();
    h.update(req.url.as_bytes());
    h.update(b"\n");
    h.update(serde_json::to_string(&req.body).expect("serializable").as_bytes());
    hex::encode(h.finalize())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixtureEntry {
    pub url: String,
    pub request: Value,
    pub response: HttpResponse,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixtureStore {
    pub format: String,
    pub entries: BTreeMap<String, FixtureEntry>,
}

impl Default for FixtureStore {
    fn default() -> Self {
        FixtureStore { format: FIXTURE_FORMAT.into(), entries: BTreeMap::new() }
    }
}

impl FixtureStore {
    pub fn parse(text: &str) -> Result<Self, LlmError> {
        let s: FixtureStore =
            serde_json::from_str(text).map_err(|e| LlmError::Fixture(e.to_string()))?;
        if s.format != FIXTURE_FORMAT {
            return Err(LlmError::Fixture(format!("unsupported format `{}`", s.format)));
        }
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self, LlmError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| LlmError::Fixture(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Loads the file if it exists, otherwise starts empty.
    pub fn load_or_default(path: &Path) -> Result<Self, LlmError> {
        if path.exists() {
            Self::load(path)
        } else {
            Ok(Self::default())
        }
    }

    pub fn save(&self, path: &Path) -> Result<(), LlmError> {
        std::fs::write(path, serde_json::to_string_pretty(self).expect("serializable"))?;
        Ok(())
    }

    pub fn get(&self, req: &HttpRequest) -> Option<&FixtureEntry> {
        self.entries.get(&request_key(req))
    }
}

/// Replaces every occurrence of each secret with a marker.
pub fn redact(text: &str, secrets: &[String]) -> String {
    secrets
        .iter()
        .filter(|s| !s.is_empty())
        .fold(text.to_string(), |t, s| t.replace(s.as_str(), "[REDACTED]"))
}

fn redact_value(v: &Value, secrets: &[String]) -> Value {
    match v {
        Value::String(s) => Value::String(redact(s, secrets)),
        Value::Array(a) => Value::Array(a.iter().map(|x| redact_value(x, secrets)).collect()),
        Value::Object(m) => {
            Value::Object(m.iter().map(|(k, x)| (k.clone(), redact_value(x, secrets))).collect())
        }
        other => other.clone(),
    }
}

/// Serves responses from a fixture store only; unknown requests fail.
pub struct ReplayTransport {
    store: FixtureStore,
}

impl ReplayTransport {
    pub fn new(store: FixtureStore) -> Self {
        ReplayTransport { store }
    }

    pub fn from_file(path: &Path) -> Result<Self, LlmError> {
        Ok(Self::new(FixtureStore::load(path)?))
    }
}

impl Transport for ReplayTransport {
    fn post(&self, req: &HttpRequest, _api_key: Option<&str>) -> Result<HttpResponse, TransportFailure> {
        self.store.get(req).map(|e| e.response.clone()).ok_or_else(|| {
            TransportFailure::Fatal(LlmError::Fixture(format!(
                "no recorded response for request {} to {}",
                &request_key(req)[..12],
                req.url
            )))
        })
    }

    fn needs_credentials(&self) -> bool {
        false
    }
}

/// Forwards to another transport and records successful exchanges. The API key and any
/// extra secrets are redacted before anything is stored.
pub struct RecordingTransport {
    inner: Arc<dyn Transport>,
    store: Mutex<FixtureStore>,
    path: Option<PathBuf>,
    secrets: Vec<String>,
}

impl RecordingTransport {
    pub fn new(inner: Arc<dyn Transport>, store: FixtureStore, path: Option<PathBuf>) -> Self {
        RecordingTransport { inner, store: Mutex::new(store), path, secrets: Vec::new() }
    }

    pub fn with_secrets(mut self, secrets: Vec<String>) -> Self {
        self.secrets = secrets;
        self
    }

    pub fn store(&self) -> FixtureStore {
        self.store.lock().unwrap_or_else(|e| e.into_inner()).clone()
    }

    /// Writes the store to its file, if one was given.
    pub fn flush(&self) -> Result<(), LlmError> {
        match &self.path {
            Some(p) => self.store().save(p),
            None => Ok(()),
        }
    }
}

impl Transport for RecordingTransport {
    fn post(&self, req: &HttpRequest, api_key: Option<&str>) -> Result<HttpResponse, TransportFailure> {
        let resp = self.inner.post(req, api_key)?;
        if (200..300).contains(&resp.status) {
            let mut secrets = self.secrets.clone();
            secrets.extend(api_key.map(String::from));
            let entry = FixtureEntry {
                url: redact(&req.url, &secrets),
                request: redact_value(&req.body, &secrets),
                response: HttpResponse { status: resp.status, body: redact(&resp.body, &secrets) },
            };
            self.store
                .lock()
                .unwrap_or_else(|e| e.into_inner())
                .entries
                .insert(request_key(req), entry);
        }
        Ok(resp)
    }

    fn needs_credentials(&self) -> bool {
        self.inner.needs_credentials()
    }
}
