//! Players for One Night Ultimate Werewolf: exact-belief scripted players and
//! model-backed players with belief modeling, tactic selection and structured speeches.

pub mod agent;
pub mod compose;
pub mod config;
pub mod context;
pub mod embed;
pub mod error;
pub mod llm_agent;
pub mod scripted;
pub mod speech;
pub mod table;
pub mod tactic_source;
pub mod world;

pub use agent::{Agent, AgentKind};
pub use compose::{compose_policy_check, total_variation, ComposedPolicy, CompositionReport};
pub use config::AgentConfig;
pub use context::{public_speech, AgentContext};
pub use embed::GatewayEmbedder;
pub use error::AgentError;
pub use llm_agent::{known_own_role, LlmAgent, MAX_SPEECH_WORDS};
pub use scripted::ScriptedAgent;
pub use speech::{render_claims, scripted_claims, SpeechPlan};
pub use table::{team_aware_vote, NightTable};
pub use tactic_source::{encode_state, TacticSource};
pub use world::{consistent_worlds, report_from_belief, simulate_night, world_belief, World};
