use onuw_core::{BeliefError, GameError};
use onuw_llm::LlmError;
use onuw_policy::PolicyError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AgentError {
    #[error("invalid agent configuration: {0}")]
    Config(String),
    #[error("wrong phase: {0}")]
    Phase(String),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Belief(#[from] BeliefError),
    #[error(transparent)]
    Llm(#[from] LlmError),
    #[error(transparent)]
    Policy(#[from] PolicyError),
}
