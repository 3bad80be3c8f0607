//! Agent configuration files.

use std::path::PathBuf;
use std::sync::Arc;

use onuw_core::{PlayerId, Tactic};
use onuw_llm::{Gateway, PromptTemplates};
use onuw_policy::{EncoderMode, QFunction, SelectionMode, TextEmbedder};
use serde::{Deserialize, Serialize};

use crate::agent::{Agent, AgentKind};
use crate::embed::GatewayEmbedder;
use crate::error::AgentError;
use crate::llm_agent::LlmAgent;
use crate::scripted::ScriptedAgent;
use crate::table::NightTable;
use crate::tactic_source::TacticSource;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AgentConfig {
    pub kind: AgentKind,
    /// Encoder used by the policy-driven kind.
    pub encoder: EncoderMode,
    /// Q-function artifact for the policy-driven kind.
    pub q_function: Option<PathBuf>,
    /// Sample tactics from a softmax at this temperature instead of acting greedily.
    pub policy_temperature: Option<f64>,
    /// Scripted players: fixed tactic, or uniform random when `random_tactic` is set.
    pub fixed_tactic: Option<Tactic>,
    pub random_tactic: bool,
    pub night_table: NightTable,
    pub vote: Option<PlayerId>,
}

impl Default for AgentConfig {
    fn default() -> Self {
        AgentConfig {
            kind: AgentKind::Scripted,
            encoder: EncoderMode::Structural { rounds: 3 },
            q_function: None,
            policy_temperature: None,
            fixed_tactic: None,
            random_tactic: false,
            night_table: NightTable::default(),
            vote: None,
        }
    }
}

impl AgentConfig {
    pub fn scripted() -> Self {
        Self::default()
    }

    pub fn from_toml(text: &str) -> Result<Self, AgentError> {
        toml::from_str(text).map_err(|e| AgentError::Config(e.to_string()))
    }

    fn selection(&self) -> SelectionMode {
        match self.policy_temperature {
            Some(t) => SelectionMode::Softmax { temperature: t },
            None => SelectionMode::Greedy,
        }
    }

    /// Builds the agent for one seat. `q` overrides the artifact path when given.
    pub fn build(
        &self,
        seed: u64,
        gateway: Option<Arc<Gateway>>,
        prompts: Arc<PromptTemplates>,
        q: Option<Arc<QFunction>>,
    ) -> Result<Box<dyn Agent>, AgentError> {
        let q = match (q, &self.q_function) {
            (Some(q), _) => Some(q),
            (None, Some(path)) => Some(Arc::new(QFunction::load(path)?)),
            (None, None) => None,
        };
        let embedder: Option<Arc<dyn TextEmbedder + Send + Sync>> = match (&self.encoder, &gateway) {
            (EncoderMode::Remote { .. }, Some(g)) => Some(Arc::new(GatewayEmbedder(g.clone()))),
            _ => None,
        };
        let policy = |q: Arc<QFunction>| -> Result<TacticSource, AgentError> {
            if q.state_dim() != self.encoder.dim() {
                return Err(AgentError::Config(format!(
                    "Q-function expects {} features, encoder {} gives {}",
                    q.state_dim(),
                    self.encoder.name(),
                    self.encoder.dim()
                )));
            }
            Ok(TacticSource::Policy {
                q,
                encoder: self.encoder.clone(),
                mode: self.selection(),
                embedder: embedder.clone(),
            })
        };
        let tactics = match (self.kind, q) {
            (AgentKind::RLInstructed, Some(q)) => policy(q)?,
            (AgentKind::RLInstructed, None) => {
                return Err(AgentError::Config("the RL-instructed player needs a trained Q-function".into()))
            }
            (AgentKind::RandomTactic, _) => TacticSource::Random,
            (AgentKind::Scripted, Some(q)) if self.fixed_tactic.is_none() && !self.random_tactic => policy(q)?,
            (AgentKind::Scripted, _) => match (self.fixed_tactic, self.random_tactic) {
                (Some(t), _) => TacticSource::Fixed(t),
                (None, true) => TacticSource::Random,
                (None, false) => TacticSource::None,
            },
            _ => TacticSource::None,
        };
        if self.kind == AgentKind::Scripted {
            let mut a = ScriptedAgent::new(self.night_table.clone(), tactics, seed);
            a.vote = self.vote;
            return Ok(Box::new(a));
        }
        let gateway = gateway.ok_or_else(|| {
            AgentError::Config(format!("{:?} players need a model gateway", self.kind))
        })?;
        Ok(Box::new(LlmAgent::new(self.kind, gateway, prompts, tactics, seed)?))
    }
}
