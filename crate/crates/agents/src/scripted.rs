use onuw_core::{BeliefReport, ClaimConsistency, NightActionKind, Phase, PlayerId, Tactic};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::agent::{day_or_voting, expect_phase, Agent, AgentKind};
use crate::context::AgentContext;
use crate::error::AgentError;
use crate::speech::{render_claims, scripted_claims, SpeechPlan};
use crate::table::{team_aware_vote, NightTable};
use crate::tactic_source::TacticSource;
use crate::world::{report_from_belief, world_belief};

/// Deterministic player driven by exact beliefs, a night table and template speeches.
#[derive(Debug)]
pub struct ScriptedAgent {
    pub table: NightTable,
    pub tactics: TacticSource,
    pub likelihood: ClaimConsistency,
    /// Overrides the computed vote.
    pub vote: Option<PlayerId>,
    rng: ChaCha8Rng,
}

impl ScriptedAgent {
    pub fn new(table: NightTable, tactics: TacticSource, seed: u64) -> Self {
        ScriptedAgent {
            table,
            tactics,
            likelihood: ClaimConsistency::default(),
            vote: None,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn with_vote(mut self, target: PlayerId) -> Self {
        self.vote = Some(target);
        self
    }
}

impl Agent for ScriptedAgent {
    fn kind(&self) -> AgentKind {
        AgentKind::Scripted
    }

    fn model_belief(&mut self, ctx: &AgentContext) -> Result<BeliefReport, AgentError> {
        expect_phase(ctx, day_or_voting(ctx), "belief modeling")?;
        let b = world_belief(ctx, &self.table, &self.likelihood)?;
        Ok(report_from_belief(ctx, &b))
    }

    fn select_tactic(&mut self, ctx: &AgentContext, report: &BeliefReport) -> Result<Option<Tactic>, AgentError> {
        expect_phase(ctx, matches!(ctx.phase, Phase::Day(_)), "tactic selection")?;
        self.tactics.select(ctx, report, &mut self.rng)
    }

    fn decide_night(&mut self, ctx: &AgentContext) -> Result<NightActionKind, AgentError> {
        expect_phase(ctx, ctx.phase == Phase::Night, "a night action")?;
        Ok(self.table.action(ctx.player, ctx.initial_role, ctx.player_count()))
    }

    fn decide_speech(
        &mut self,
        ctx: &AgentContext,
        report: &BeliefReport,
        tactic: Option<Tactic>,
    ) -> Result<SpeechPlan, AgentError> {
        expect_phase(ctx, matches!(ctx.phase, Phase::Day(_)), "a speech")?;
        let claims = scripted_claims(ctx, report, tactic);
        let text = render_claims(ctx.player, &claims);
        Ok(SpeechPlan { tactic, claims, text })
    }

    fn decide_vote(&mut self, ctx: &AgentContext, report: &BeliefReport) -> Result<PlayerId, AgentError> {
        expect_phase(ctx, ctx.phase == Phase::Voting, "a vote")?;
        Ok(match self.vote {
            Some(t) if t != ctx.player && t.index() < ctx.player_count() => t,
            _ => team_aware_vote(ctx.player, report),
        })
    }

    fn take_flags(&mut self) -> Vec<String> {
        Vec::new()
    }
}
