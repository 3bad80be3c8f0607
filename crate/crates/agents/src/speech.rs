//! Structured speeches of scripted players.

use onuw_core::{BeliefReport, Claim, ClaimTime, NightActionKind, Observation, PlayerId, RoleCard, Tactic};
use serde::{Deserialize, Serialize};

use crate::context::AgentContext;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpeechPlan {
    pub tactic: Option<Tactic>,
    pub claims: Vec<Claim>,
    pub text: String,
}

impl SpeechPlan {
    /// Every claim's honesty flag agrees with the tactic (vacuous without a tactic).
    pub fn adheres(&self) -> bool {
        match self.tactic {
            Some(t) => self.claims.iter().all(|c| c.honest == t.is_honest()),
            None => true,
        }
    }
}

fn claim(subject: PlayerId, role: RoleCard, negated: bool, time: ClaimTime, honest: bool) -> Claim {
    Claim { subject, role, negated, time, honest }
}

/// The other player with the highest (or lowest) Werewolf probability; lowest seat wins ties.
fn extreme_other(ctx: &AgentContext, report: &BeliefReport, highest: bool) -> PlayerId {
    let mut best: Option<(PlayerId, f64)> = None;
    for p in ctx.others() {
        let w = report.werewolf_prob(p);
        let s = if highest { w } else { -w };
        if best.is_none_or(|(_, b)| s > b) {
            best = Some((p, s));
        }
    }
    best.expect("at least two players").0
}

/// What the player's own night record lets it state as fact.
fn evidence_claims(ctx: &AgentContext) -> Vec<Claim> {
    let me = ctx.player;
    let mut v = vec![claim(me, ctx.initial_role, false, ClaimTime::Initial, true)];
    match ctx.observation() {
        Observation::SawPlayer { target, role } => v.push(claim(target, role, false, ClaimTime::Initial, true)),
        Observation::NewRole(r) => {
            if let Some(NightActionKind::RobberSwitch(t)) = ctx.own_action() {
                v.push(claim(t, r, false, ClaimTime::Initial, true));
                v.push(claim(me, r, false, ClaimTime::Final, true));
            }
        }
        Observation::FinalRole(r) => v.push(claim(me, r, false, ClaimTime::Final, true)),
        // Werewolf partners and pool cards are not stated.
        Observation::Werewolves(_) | Observation::Nothing | Observation::SawPool { .. } => {}
    }
    v
}

/// A village role the player was not dealt, used for bluffs.
fn bluff_role(ctx: &AgentContext) -> RoleCard {
    if ctx.initial_role == RoleCard::Seer {
        RoleCard::Villager
    } else {
        RoleCard::Seer
    }
}

/// Claims for a scripted speech. Honest tactics state what the belief or the night
/// record supports; deceptive tactics state the opposite, with the intent flag cleared.
pub fn scripted_claims(ctx: &AgentContext, report: &BeliefReport, tactic: Option<Tactic>) -> Vec<Claim> {
    let me = ctx.player;
    let suspect = extreme_other(ctx, report, true);
    let trusted = extreme_other(ctx, report, false);
    let i_am_wolf = report.self_estimate == RoleCard::Werewolf;
    match tactic {
        None => {
            let mut v = vec![claim(me, report.self_estimate, false, ClaimTime::Final, true)];
            if report.werewolf_prob(suspect) > 0.0 {
                v.push(claim(suspect, RoleCard::Werewolf, false, ClaimTime::Final, true));
            }
            v
        }
        Some(Tactic::HonestEvidence) => evidence_claims(ctx),
        Some(Tactic::DeceptiveEvidence) => vec![
            claim(me, bluff_role(ctx), false, ClaimTime::Initial, false),
            claim(suspect, RoleCard::Werewolf, true, ClaimTime::Final, false),
        ],
        Some(Tactic::HonestAccusation) => {
            vec![claim(suspect, RoleCard::Werewolf, false, ClaimTime::Final, true)]
        }
        Some(Tactic::DeceptiveAccusation) => {
            vec![claim(trusted, RoleCard::Werewolf, false, ClaimTime::Final, false)]
        }
        Some(Tactic::HonestDefense) => {
            if i_am_wolf {
                vec![claim(trusted, RoleCard::Werewolf, true, ClaimTime::Final, true)]
            } else {
                vec![claim(me, RoleCard::Werewolf, true, ClaimTime::Final, true)]
            }
        }
        Some(Tactic::DeceptiveDefense) => {
            let target = if i_am_wolf { me } else { suspect };
            vec![claim(target, RoleCard::Werewolf, true, ClaimTime::Final, false)]
        }
    }
}

/// Plain-text rendering of claims, first person for the speaker.
pub fn render_claims(me: PlayerId, claims: &[Claim]) -> String {
    if claims.is_empty() {
        return "I have nothing to add.".into();
    }
    claims
        .iter()
        .map(|c| {
            if c.subject == me {
                let verb = match (c.time, c.negated) {
                    (ClaimTime::Initial, false) => "was dealt",
                    (ClaimTime::Initial, true) => "was not dealt",
                    (ClaimTime::Final, false) => "am",
                    (ClaimTime::Final, true) => "am not",
                };
                format!("I {verb} the {}.", c.role)
            } else {
                format!("{c}.")
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}
