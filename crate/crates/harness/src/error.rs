use onuw_agents::AgentError;
use onuw_core::GameError;
use onuw_equilibrium::EquilibriumError;
use onuw_llm::LlmError;
use onuw_policy::PolicyError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid experiment configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Agent(#[from] AgentError),
    #[error(transparent)]
    Policy(#[from] PolicyError),
    #[error(transparent)]
    Llm(#[from] LlmError),
    #[error(transparent)]
    Equilibrium(#[from] EquilibriumError),
    #[error("{0}")]
    Data(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
