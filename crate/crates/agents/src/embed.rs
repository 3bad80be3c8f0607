use std::sync::Arc;

use onuw_llm::Gateway;
use onuw_policy::{PolicyError, TextEmbedder};

/// Embeds policy states through the gateway.
pub struct GatewayEmbedder(pub Arc<Gateway>);

impl TextEmbedder for GatewayEmbedder {
    fn embed(&self, texts: &[String]) -> Result<Vec<Vec<f64>>, PolicyError> {
        self.0.embed(texts).map_err(|e| PolicyError::Embedding(e.to_string()))
    }
}
