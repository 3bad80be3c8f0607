//! Players backed by a chat model.

use std::collections::BTreeMap;
use std::sync::Arc;

use onuw_core::night::legal_actions_for;
use onuw_core::{
    BeliefReport, Claim, ClaimTime, NightActionKind, Observation, Phase, PlayerId, RoleCard,
    Tactic, ALL_ROLES, ALL_TACTICS,
};
use onuw_llm::{
    extract_role_mentions, ChatMessage, Gateway, Parsed, PromptTemplates, ReplyFormat, TemplateId,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::agent::{day_or_voting, expect_phase, Agent, AgentKind};
use crate::context::AgentContext;
use crate::error::AgentError;
use crate::speech::SpeechPlan;
use crate::table::team_aware_vote;
use crate::tactic_source::TacticSource;

pub const MAX_SPEECH_WORDS: usize = 50;
pub const DEFAULT_BELIEF_CONFIDENCE: f64 = 0.9;

pub struct LlmAgent {
    kind: AgentKind,
    gateway: Arc<Gateway>,
    prompts: Arc<PromptTemplates>,
    /// Used by the random and policy-driven kinds.
    tactics: TacticSource,
    /// Probability put on the role a belief reply names for a player.
    pub belief_confidence: f64,
    rng: ChaCha8Rng,
    flags: Vec<String>,
}

impl LlmAgent {
    pub fn new(
        kind: AgentKind,
        gateway: Arc<Gateway>,
        prompts: Arc<PromptTemplates>,
        tactics: TacticSource,
        seed: u64,
    ) -> Result<Self, AgentError> {
        match (kind, &tactics) {
            (AgentKind::Scripted, _) => {
                return Err(AgentError::Config("scripted players do not use a model".into()))
            }
            (AgentKind::RLInstructed, TacticSource::Policy { .. }) => {}
            (AgentKind::RLInstructed, _) => {
                return Err(AgentError::Config("the RL-instructed player needs a trained Q-function".into()))
            }
            _ => {}
        }
        Ok(LlmAgent {
            kind,
            gateway,
            prompts,
            tactics,
            belief_confidence: DEFAULT_BELIEF_CONFIDENCE,
            rng: ChaCha8Rng::seed_from_u64(seed),
            flags: Vec::new(),
        })
    }

    fn flag(&mut self, ctx: &AgentContext, what: &str) {
        self.flags.push(format!("{}: {what}", ctx.player));
    }

    fn system_prompt(&self, ctx: &AgentContext) -> Result<String, AgentError> {
        let mut counts: BTreeMap<RoleCard, usize> = BTreeMap::new();
        for r in &ctx.spec.candidate_roles {
            *counts.entry(*r).or_default() += 1;
        }
        let deck: Vec<String> = ALL_ROLES
            .iter()
            .filter_map(|r| counts.get(r).map(|c| format!("{c} {r}")))
            .collect();
        let order: Vec<String> = ctx.spec.night_order.iter().map(|r| r.to_string()).collect();
        let v = onuw_llm::vars([
            ("player_count", ctx.player_count().to_string()),
            ("card_count", ctx.spec.candidate_roles.len().to_string()),
            ("candidate_roles", deck.join(", ")),
            ("pool_size", "3".to_string()),
            ("night_order", order.join(", ")),
            ("rounds", ctx.spec.discussion_rounds.to_string()),
            ("agent_name", ctx.player.to_string()),
        ]);
        let mut s = self.prompts.render(TemplateId::Global, &v)?;
        s.push('\n');
        s.push_str(&self.prompts.render(TemplateId::Role(ctx.initial_role), &v)?);
        if ctx.phase != Phase::Night {
            s.push('\n');
            s.push_str(&ctx.private_notes());
        }
        Ok(s)
    }

    fn belief_text(&self, ctx: &AgentContext, report: &BeliefReport) -> String {
        if !self.kind.models_belief() {
            return ctx.private_notes();
        }
        let mut t = String::new();
        for (i, m) in report.marginals.iter().enumerate() {
            let p = PlayerId(i as u8);
            t.push_str(&format!(
                "{p}: most likely {} ({:.2}); Werewolf {:.2}\n",
                report.most_likely(p),
                m[report.most_likely(p).index()],
                report.werewolf_prob(p)
            ));
        }
        t
    }

    /// Asks once, and once more with the problem spelled out if the reply is unusable.
    /// `None` means both attempts failed.
    fn ask<T>(
        &mut self,
        ctx: &AgentContext,
        user: String,
        format: ReplyFormat,
        accept: impl Fn(&Parsed) -> Result<T, String>,
    ) -> Result<Option<T>, AgentError> {
        let mut messages = vec![ChatMessage::system(self.system_prompt(ctx)?), ChatMessage::user(user)];
        for attempt in 0..2 {
            let reply = self.gateway.chat(&messages, format)?.reply;
            let problem = match &reply.parsed {
                Some(p) => match accept(p) {
                    Ok(v) => return Ok(Some(v)),
                    Err(e) => e,
                },
                None => reply.error.clone().unwrap_or_default(),
            };
            if attempt == 0 {
                messages.push(ChatMessage { role: "assistant".into(), content: reply.raw.clone() });
                messages.push(ChatMessage::user(format!(
                    "That answer cannot be used ({problem}). Answer again, following the required format exactly."
                )));
            } else {
                self.flag(ctx, &format!("unusable reply after re-ask: {problem}"));
            }
        }
        Ok(None)
    }

    fn report_from_mentions(&self, ctx: &AgentContext, mentions: &[(PlayerId, RoleCard)], rationale: String) -> BeliefReport {
        let n = ctx.player_count();
        let c = self.belief_confidence;
        let mut marginals = vec![[1.0 / 6.0; 6]; n];
        for (p, r) in mentions {
            let mut m = [(1.0 - c) / 5.0; 6];
            m[r.index()] = c;
            marginals[p.index()] = m;
        }
        let self_estimate = mentions
            .iter()
            .find(|(p, _)| *p == ctx.player)
            .map(|(_, r)| *r)
            .unwrap_or_else(|| known_own_role(ctx));
        BeliefReport { marginals, rationale, self_estimate, degraded: false }
    }
}

/// The card the player can be sure (or most sure) it holds.
pub fn known_own_role(ctx: &AgentContext) -> RoleCard {
    match ctx.observation() {
        Observation::NewRole(r) | Observation::FinalRole(r) => r,
        _ => ctx.initial_role,
    }
}

fn truncate_words(text: &str, max: usize) -> (String, bool) {
    let words: Vec<&str> = text.split_whitespace().collect();
    if words.len() <= max {
        (text.trim().to_string(), false)
    } else {
        (words[..max].join(" "), true)
    }
}

fn names(players: impl Iterator<Item = PlayerId>) -> String {
    players.map(|p| p.to_string()).collect::<Vec<_>>().join(", ")
}

const POOL_CHOICE: &str = "Center pool";

impl Agent for LlmAgent {
    fn kind(&self) -> AgentKind {
        self.kind
    }

    fn model_belief(&mut self, ctx: &AgentContext) -> Result<BeliefReport, AgentError> {
        expect_phase(ctx, day_or_voting(ctx), "belief modeling")?;
        if !self.kind.models_belief() {
            let mut r = BeliefReport::uniform(ctx.player_count(), known_own_role(ctx));
            r.rationale = "no belief step".into();
            return Ok(r);
        }
        let v = onuw_llm::vars([
            ("history", ctx.history_text()),
            ("agent_name", ctx.player.to_string()),
            ("player_names", names(PlayerId::all(ctx.player_count()))),
        ]);
        let prompt = self.prompts.render(TemplateId::Belief, &v)?;
        let (me, n) = (ctx.player, ctx.player_count());
        let got = self.ask(ctx, prompt, ReplyFormat::Belief, |p| match p {
            Parsed::Belief { reasoning, result } => {
                let m = extract_role_mentions(result, me, n);
                if m.is_empty() {
                    Err("the result names no player's role".into())
                } else {
                    Ok((m, format!("{reasoning}\n{result}")))
                }
            }
            _ => Err("unexpected layout".into()),
        })?;
        Ok(match got {
            Some((mentions, rationale)) => self.report_from_mentions(ctx, &mentions, rationale),
            None => {
                let mut r = BeliefReport::uniform(n, known_own_role(ctx));
                r.degraded = true;
                r.rationale = "belief reply unusable".into();
                r
            }
        })
    }

    fn select_tactic(&mut self, ctx: &AgentContext, report: &BeliefReport) -> Result<Option<Tactic>, AgentError> {
        expect_phase(ctx, matches!(ctx.phase, Phase::Day(_)), "tactic selection")?;
        match self.kind {
            AgentKind::ReAct | AgentKind::Belief | AgentKind::Scripted => Ok(None),
            AgentKind::RandomTactic | AgentKind::RLInstructed => {
                self.tactics.select(ctx, report, &mut self.rng)
            }
            AgentKind::LLMInstructed => {
                let labels: Vec<&str> = ALL_TACTICS.iter().map(|t| t.label()).collect();
                let v = onuw_llm::vars([
                    ("history", ctx.history_text()),
                    ("agent_name", ctx.player.to_string()),
                    ("current_belief", self.belief_text(ctx, report)),
                    ("tactic_names", labels.join(", ")),
                ]);
                let prompt = self.prompts.render(TemplateId::TacticChoice, &v)?;
                let got = self.ask(ctx, prompt, ReplyFormat::TacticChoice, |p| match p {
                    Parsed::TacticChoice { tactic, .. } => tactic.parse::<Tactic>(),
                    _ => Err("unexpected layout".into()),
                })?;
                Ok(Some(got.unwrap_or(Tactic::HonestEvidence)))
            }
        }
    }

    fn decide_night(&mut self, ctx: &AgentContext) -> Result<NightActionKind, AgentError> {
        expect_phase(ctx, ctx.phase == Phase::Night, "a night action")?;
        let n = ctx.player_count();
        let legal = legal_actions_for(ctx.initial_role, ctx.player, n, &ctx.spec.night_order);
        if legal.len() == 1 {
            return Ok(legal[0]);
        }
        let me = ctx.player;
        let mut choices = names(ctx.others());
        if ctx.initial_role == RoleCard::Seer {
            choices.push_str(&format!(", {POOL_CHOICE}"));
        }
        let v = onuw_llm::vars([("agent_name", me.to_string()), ("player_names", choices)]);
        let prompt = self.prompts.render(TemplateId::Night(ctx.initial_role), &v)?;
        let pool_pair = [(0, 1), (0, 2), (1, 2)][self.rng.gen_range(0..3)];
        let is_legal = |a: NightActionKind| {
            let a = a.normalized();
            if legal.contains(&a) {
                Ok(a)
            } else {
                Err(format!("{a} is not an allowed choice"))
            }
        };
        let parse_player = |s: &str| s.parse::<PlayerId>();
        let (format, fallback) = match ctx.initial_role {
            RoleCard::Seer => (ReplyFormat::Player, NightActionKind::SeerCheckPool(0, 1)),
            RoleCard::Robber => (ReplyFormat::Switch, NightActionKind::RobberPass),
            _ => (ReplyFormat::Swap, NightActionKind::NoAction),
        };
        let got = self.ask(ctx, prompt, format, |p| match p {
            Parsed::Player { player, .. } => {
                let lower = player.to_ascii_lowercase();
                if lower.contains("pool") || lower.contains("center") {
                    is_legal(NightActionKind::SeerCheckPool(pool_pair.0, pool_pair.1))
                } else {
                    is_legal(NightActionKind::SeerCheckPlayer(parse_player(player)?))
                }
            }
            Parsed::Switch { switch: false, .. } => is_legal(NightActionKind::RobberPass),
            Parsed::Switch { player: Some(t), .. } => is_legal(NightActionKind::RobberSwitch(parse_player(t)?)),
            Parsed::Swap { switch: false, .. } => is_legal(NightActionKind::NoAction),
            Parsed::Swap { players, .. } => {
                is_legal(NightActionKind::TroublemakerSwap(parse_player(&players[0])?, parse_player(&players[1])?))
            }
            _ => Err("unexpected layout".into()),
        })?;
        Ok(got.unwrap_or(fallback))
    }

    fn decide_speech(
        &mut self,
        ctx: &AgentContext,
        report: &BeliefReport,
        tactic: Option<Tactic>,
    ) -> Result<SpeechPlan, AgentError> {
        expect_phase(ctx, matches!(ctx.phase, Phase::Day(_)), "a speech")?;
        let v = onuw_llm::vars([
            ("history", ctx.history_text()),
            ("agent_name", ctx.player.to_string()),
            ("current_belief", self.belief_text(ctx, report)),
            ("rounds_left", ctx.rounds_left().to_string()),
        ]);
        let prompt = self.prompts.render_discussion(tactic, &v)?;
        let got = self.ask(ctx, prompt, ReplyFormat::Speech, |p| match p {
            Parsed::Speech { speech, .. } if !speech.trim().is_empty() => Ok(speech.clone()),
            Parsed::Speech { .. } => Err("the speech is empty".into()),
            _ => Err("unexpected layout".into()),
        })?;
        let raw = got.unwrap_or_else(|| "I have nothing to add.".to_string());
        let (text, cut) = truncate_words(&raw, MAX_SPEECH_WORDS);
        if cut {
            self.flag(ctx, "speech truncated");
        }
        let honest = tactic.is_none_or(|t| t.is_honest());
        let claims = extract_role_mentions(&text, ctx.player, ctx.player_count())
            .into_iter()
            .map(|(subject, role)| Claim { subject, role, negated: false, time: ClaimTime::Final, honest })
            .collect();
        Ok(SpeechPlan { tactic, claims, text })
    }

    fn decide_vote(&mut self, ctx: &AgentContext, report: &BeliefReport) -> Result<PlayerId, AgentError> {
        expect_phase(ctx, ctx.phase == Phase::Voting, "a vote")?;
        let v = onuw_llm::vars([
            ("history", ctx.history_text()),
            ("agent_name", ctx.player.to_string()),
            ("current_belief", self.belief_text(ctx, report)),
            ("player_names", names(ctx.others())),
        ]);
        let prompt = self.prompts.render(TemplateId::Voting, &v)?;
        let (me, n) = (ctx.player, ctx.player_count());
        let got = self.ask(ctx, prompt, ReplyFormat::Player, |p| match p {
            Parsed::Player { player, .. } => {
                let t = player.parse::<PlayerId>()?;
                if t == me {
                    Err("you cannot vote for yourself".into())
                } else if t.index() >= n {
                    Err(format!("{t} is not in the game"))
                } else {
                    Ok(t)
                }
            }
            _ => Err("unexpected layout".into()),
        })?;
        Ok(got.unwrap_or_else(|| team_aware_vote(me, report)))
    }

    fn take_flags(&mut self) -> Vec<String> {
        std::mem::take(&mut self.flags)
    }
}
