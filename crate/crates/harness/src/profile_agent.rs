//! A seat that plays a behavioral strategy of the three-player Werewolf/Robber game.

use onuw_agents::{Agent, AgentContext, AgentError, AgentKind, SpeechPlan};
use onuw_core::night::legal_actions_for;
use onuw_core::{BeliefReport, NightActionKind, PlayerId, RoleCard, Tactic};
use onuw_equilibrium::three_player::{vote_options, NightChoice};
use onuw_equilibrium::StrategyProfile3P;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SILENT_SPEECH: &str = "I have nothing to add.";

pub struct ProfileAgent {
    profile: StrategyProfile3P,
    rng: ChaCha8Rng,
}

impl ProfileAgent {
    pub fn new(profile: StrategyProfile3P, seed: u64) -> Self {
        ProfileAgent { profile, rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    fn check_seat(ctx: &AgentContext) -> Result<(), AgentError> {
        let expected = match ctx.player.index() {
            0 | 1 => RoleCard::Werewolf,
            2 => RoleCard::Robber,
            _ => return Err(AgentError::Config("profile seats are 1 to 3".into())),
        };
        if ctx.player_count() != 3 || ctx.initial_role != expected {
            return Err(AgentError::Config(format!(
                "profile play needs Werewolf, Werewolf, Robber; {} holds {}",
                ctx.player, ctx.initial_role
            )));
        }
        Ok(())
    }

    /// Probability of the second option of `vote_options(seat)` at this seat's vote.
    fn second_option_prob(&self, ctx: &AgentContext) -> f64 {
        let p = &self.profile;
        match ctx.player.index() {
            0 => p.q1,
            1 => p.q2,
            _ => {
                let night = ctx.own_action().and_then(NightChoice::from_action);
                1.0 - match night {
                    Some(NightChoice::SwitchP1) => p.s1_vote_p1,
                    Some(NightChoice::SwitchP2) => p.s2_vote_p1,
                    _ => p.p,
                }
            }
        }
    }
}

impl Agent for ProfileAgent {
    fn kind(&self) -> AgentKind {
        AgentKind::Scripted
    }

    fn model_belief(&mut self, ctx: &AgentContext) -> Result<BeliefReport, AgentError> {
        Ok(BeliefReport::uniform(ctx.player_count(), ctx.initial_role))
    }

    fn select_tactic(&mut self, _: &AgentContext, _: &BeliefReport) -> Result<Option<Tactic>, AgentError> {
        Ok(None)
    }

    fn decide_night(&mut self, ctx: &AgentContext) -> Result<NightActionKind, AgentError> {
        Self::check_seat(ctx)?;
        if ctx.initial_role == RoleCard::Robber {
            let u: f64 = self.rng.gen();
            let s = self.profile.s;
            let choice = if u < s {
                NightChoice::SwitchP1
            } else if u < 2.0 * s {
                NightChoice::SwitchP2
            } else {
                NightChoice::NoSwitch
            };
            return Ok(choice.action());
        }
        let legal = legal_actions_for(ctx.initial_role, ctx.player, 3, &ctx.spec.night_order);
        Ok(legal[0])
    }

    fn decide_speech(
        &mut self,
        _: &AgentContext,
        _: &BeliefReport,
        tactic: Option<Tactic>,
    ) -> Result<SpeechPlan, AgentError> {
        Ok(SpeechPlan { tactic, claims: Vec::new(), text: SILENT_SPEECH.into() })
    }

    fn decide_vote(&mut self, ctx: &AgentContext, _: &BeliefReport) -> Result<PlayerId, AgentError> {
        Self::check_seat(ctx)?;
        let second = self.rng.gen::<f64>() < self.second_option_prob(ctx);
        Ok(vote_options(ctx.player.index())[second as usize])
    }

    fn take_flags(&mut self) -> Vec<String> {
        Vec::new()
    }
}
