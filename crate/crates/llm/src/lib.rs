//! Access to chat-completion and embedding services: prompt rendering, retries,
//! structured reply parsing and offline record/replay.

pub mod config;
pub mod error;
pub mod gateway;
pub mod limiter;
pub mod prompts;
pub mod reply;
pub mod transport;

pub use config::{ModelConfig, RetryPolicy};
pub use error::LlmError;
pub use gateway::{ChatMessage, ChatReply, Gateway, TokenUsage};
pub use limiter::InFlightLimiter;
pub use prompts::{placeholders, render_body, vars, PromptTemplates, TemplateId};
pub use reply::{extract_json_object, extract_role_mentions, parse_reply, Parsed, ReplyFormat, StructuredReply};
pub use transport::{
    redact, request_key, FixtureEntry, FixtureStore, HttpRequest, HttpResponse, HttpTransport,
    RecordingTransport, ReplayTransport, Transport, TransportFailure,
};
