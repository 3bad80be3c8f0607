use onuw_core::{BeliefReport, NightActionKind, Phase, PlayerId, Tactic};
use serde::{Deserialize, Serialize};

use crate::context::AgentContext;
use crate::error::AgentError;
use crate::speech::SpeechPlan;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AgentKind {
    /// Model prompted with raw observations only.
    ReAct,
    /// Model with an explicit belief step, no tactic.
    Belief,
    RandomTactic,
    LLMInstructed,
    RLInstructed,
    Scripted,
}

impl AgentKind {
    pub fn needs_gateway(self) -> bool {
        !matches!(self, AgentKind::Scripted)
    }

    pub fn needs_policy(self) -> bool {
        matches!(self, AgentKind::RLInstructed)
    }

    pub fn models_belief(self) -> bool {
        !matches!(self, AgentKind::ReAct)
    }
}

/// One seat's decision maker. Decisions depend only on the context passed in (and
/// the agent's own seeded randomness).
pub trait Agent: Send {
    fn kind(&self) -> AgentKind;
    fn model_belief(&mut self, ctx: &AgentContext) -> Result<BeliefReport, AgentError>;
    fn select_tactic(&mut self, ctx: &AgentContext, report: &BeliefReport) -> Result<Option<Tactic>, AgentError>;
    fn decide_night(&mut self, ctx: &AgentContext) -> Result<NightActionKind, AgentError>;
    fn decide_speech(
        &mut self,
        ctx: &AgentContext,
        report: &BeliefReport,
        tactic: Option<Tactic>,
    ) -> Result<SpeechPlan, AgentError>;
    fn decide_vote(&mut self, ctx: &AgentContext, report: &BeliefReport) -> Result<PlayerId, AgentError>;
    /// Notes about fallbacks and repairs since the last call.
    fn take_flags(&mut self) -> Vec<String>;
}

pub(crate) fn expect_phase(ctx: &AgentContext, ok: bool, what: &str) -> Result<(), AgentError> {
    if ok {
        Ok(())
    } else {
        Err(AgentError::Phase(format!("{what} is not possible during {}", ctx.phase)))
    }
}

pub(crate) fn day_or_voting(ctx: &AgentContext) -> bool {
    matches!(ctx.phase, Phase::Day(_) | Phase::Voting)
}
