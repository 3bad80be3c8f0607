//! What a single player is allowed to know.

use onuw_core::{
    Claim, GameSpec, GameState, NightActionKind, NightRecord, Observation, Phase, PlayerId, RoleCard,
    Speech,
};
use serde::{Deserialize, Serialize};

/// One player's information state. Built only from the public record plus the
/// player's own card and night record, so every agent decision is a function of it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AgentContext {
    pub player: PlayerId,
    /// Public rules: deck, seat count, night order, number of rounds.
    pub spec: GameSpec,
    pub initial_role: RoleCard,
    /// The player's own night action and what it saw; `None` if it was not woken.
    pub night: Option<NightRecord>,
    /// Public speeches with speaker-private fields removed.
    pub history: Vec<Speech>,
    pub phase: Phase,
    pub rng_seed: u64,
}

/// A speech as other players hear it: text and claims, without the tactic label,
/// the honesty flags or the speaker's belief.
pub fn public_speech(s: &Speech) -> Speech {
    Speech {
        round: s.round,
        player: s.player,
        tactic: None,
        text: s.text.clone(),
        claims: s.claims.iter().map(Claim::public).collect(),
        belief: None,
    }
}

impl AgentContext {
    pub fn from_state(state: &GameState, player: PlayerId, rng_seed: u64) -> Self {
        let mut spec = state.spec.clone();
        // The deal seed would reveal everyone's cards.
        spec.rng_seed = 0;
        AgentContext {
            player,
            spec,
            initial_role: state.initial.role_of(player),
            night: state.night_record_of(player).cloned(),
            history: state.speeches().map(public_speech).collect(),
            phase: state.phase,
            rng_seed,
        }
    }

    pub fn player_count(&self) -> usize {
        self.spec.player_count
    }

    pub fn others(&self) -> impl Iterator<Item = PlayerId> + '_ {
        PlayerId::all(self.player_count()).filter(move |p| *p != self.player)
    }

    pub fn observation(&self) -> Observation {
        self.night.as_ref().map(|r| r.observation.clone()).unwrap_or(Observation::Nothing)
    }

    pub fn own_action(&self) -> Option<NightActionKind> {
        self.night.as_ref().map(|r| r.action)
    }

    pub fn claims(&self) -> impl Iterator<Item = &Claim> {
        self.history.iter().flat_map(|s| s.claims.iter())
    }

    /// Day round about to be played (or `rounds + 1` once voting starts).
    pub fn round(&self) -> u32 {
        match self.phase {
            Phase::Night => 0,
            Phase::Day(r) => r,
            Phase::Voting | Phase::Finished => self.spec.discussion_rounds + 1,
        }
    }

    pub fn rounds_left(&self) -> u32 {
        self.spec.discussion_rounds.saturating_sub(self.round())
    }

    /// The player's private knowledge in words.
    pub fn private_notes(&self) -> String {
        let mut t = format!("You were dealt the {} card.", self.initial_role);
        match self.observation() {
            Observation::Nothing => {}
            Observation::Werewolves(ws) if ws.is_empty() => {
                t.push_str(" No other player was dealt a Werewolf card.")
            }
            Observation::Werewolves(ws) => {
                let names: Vec<String> = ws.iter().map(|p| p.to_string()).collect();
                t.push_str(&format!(" The other Werewolf card went to {}.", names.join(" and ")));
            }
            Observation::SawPlayer { target, role } => {
                t.push_str(&format!(" At night you saw that {target} held the {role} card."))
            }
            Observation::SawPool { indices, roles } => t.push_str(&format!(
                " At night you saw center cards {} and {}: {} and {}.",
                indices[0] + 1,
                indices[1] + 1,
                roles[0],
                roles[1]
            )),
            Observation::NewRole(r) => {
                if let Some(NightActionKind::RobberSwitch(t2)) = self.own_action() {
                    t.push_str(&format!(" You traded cards with {t2} and now hold the {r} card."));
                }
            }
            Observation::FinalRole(r) => {
                t.push_str(&format!(" At the end of the night you hold the {r} card."))
            }
        }
        if let Some(NightActionKind::TroublemakerSwap(a, b)) = self.own_action() {
            t.push_str(&format!(" You exchanged the cards of {a} and {b}."));
        }
        t
    }

    /// Public discussion so far, one line per speech.
    pub fn history_text(&self) -> String {
        if self.history.is_empty() {
            return "(nothing has been said yet)".into();
        }
        self.history
            .iter()
            .map(|s| format!("Round {} {}: {}", s.round, s.player, s.text))
            .collect::<Vec<_>>()
            .join("\n")
    }
}
