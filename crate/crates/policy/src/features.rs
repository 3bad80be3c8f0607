//! State featurization: a fixed structural packing, or a remote text embedding.

use onuw_core::{BeliefReport, PlayerId, RoleCard, Speech, Team};
use serde::{Deserialize, Serialize};

use crate::error::PolicyError;

/// Seats reserved in the structural layout; smaller games leave the tail at zero.
pub const MAX_PLAYERS: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EncoderMode {
    /// Deterministic packing of beliefs and public claims.
    Structural { rounds: u32 },
    /// Embedding of the rendered history and belief text.
    Remote { model: String, dim: usize },
}

impl EncoderMode {
    pub fn dim(&self) -> usize {
        match self {
            EncoderMode::Structural { rounds } => structural_dim(*rounds),
            EncoderMode::Remote { dim, .. } => *dim,
        }
    }

    pub fn name(&self) -> String {
        match self {
            EncoderMode::Structural { rounds } => format!("structural(rounds={rounds})"),
            EncoderMode::Remote { model, dim } => format!("remote({model}, dim={dim})"),
        }
    }
}

/// Layout: `MAX_PLAYERS × 6` role marginals, a one-hot round index of width `rounds + 1`
/// (the last slot marks "discussion over"), accusation counts and defense counts per
/// seat, and one own-team flag (1 for Team Werewolf).
pub fn structural_dim(rounds: u32) -> usize {
    MAX_PLAYERS * 6 + rounds as usize + 1 + 2 * MAX_PLAYERS + 1
}

/// What one player sees when it is about to speak.
#[derive(Clone, Debug)]
pub struct FeatureInput<'a> {
    pub player: PlayerId,
    /// 1-based round about to be played; `rounds + 1` after the discussion.
    pub round: u32,
    /// Public speeches so far.
    pub history: &'a [Speech],
    pub belief: &'a BeliefReport,
    pub own_team: Team,
    /// The player's private knowledge rendered as text (remote mode only).
    pub private_notes: &'a str,
}

pub trait TextEmbedder {
    fn embed(&self, texts: &[String]) -> Result<Vec<Vec<f64>>, PolicyError>;
}

/// Per-seat counts of accusations (someone else says it is a Werewolf) and defenses (a
/// claim that it is not a Werewolf, or a village-role claim about it).
pub fn claim_counts(history: &[Speech]) -> ([f64; MAX_PLAYERS], [f64; MAX_PLAYERS]) {
    let mut acc = [0.0; MAX_PLAYERS];
    let mut def = [0.0; MAX_PLAYERS];
    for s in history {
        for c in &s.claims {
            let i = c.subject.index();
            if i >= MAX_PLAYERS {
                continue;
            }
            let wolf = c.role == RoleCard::Werewolf;
            match (wolf, c.negated) {
                (true, false) if c.subject != s.player => acc[i] += 1.0,
                (true, true) | (false, false) => def[i] += 1.0,
                _ => {}
            }
        }
    }
    (acc, def)
}

pub fn encode_structural(input: &FeatureInput<'_>, rounds: u32) -> Vec<f64> {
    let mut v = Vec::with_capacity(structural_dim(rounds));
    for seat in 0..MAX_PLAYERS {
        match input.belief.marginals.get(seat) {
            Some(m) => v.extend_from_slice(m),
            None => v.extend_from_slice(&[0.0; 6]),
        }
    }
    let slot = (input.round.max(1) - 1).min(rounds) as usize;
    v.extend((0..=rounds as usize).map(|i| if i == slot { 1.0 } else { 0.0 }));
    let (acc, def) = claim_counts(input.history);
    v.extend_from_slice(&acc);
    v.extend_from_slice(&def);
    v.push(if input.own_team == Team::Werewolf {
        1.0
    } else {
        0.0
    });
    v
}

/// The text sent to the embedding service: visible history followed by the belief.
pub fn render_state_text(input: &FeatureInput<'_>) -> String {
    let mut t = format!("I am {}.\n", input.player);
    if !input.private_notes.is_empty() {
        t.push_str(input.private_notes);
        t.push('\n');
    }
    for s in input.history {
        t.push_str(&format!("Round {} {}: {}\n", s.round, s.player, s.text));
    }
    t.push_str("Belief:\n");
    for (i, m) in input.belief.marginals.iter().enumerate() {
        let p = PlayerId(i as u8);
        t.push_str(&format!(
            "{p}: most likely {} ({:.2} Werewolf)\n",
            input.belief.most_likely(p),
            m[RoleCard::Werewolf.index()]
        ));
    }
    if !input.belief.rationale.is_empty() {
        t.push_str(&input.belief.rationale);
        t.push('\n');
    }
    t
}

pub fn encode_features(
    input: &FeatureInput<'_>,
    mode: &EncoderMode,
    embedder: Option<&dyn TextEmbedder>,
) -> Result<Vec<f64>, PolicyError> {
    match mode {
        EncoderMode::Structural { rounds } => Ok(encode_structural(input, *rounds)),
        EncoderMode::Remote { dim, .. } => {
            let e = embedder.ok_or_else(|| {
                PolicyError::Config("remote encoder mode needs an embedding service".into())
            })?;
            let mut out = e.embed(&[render_state_text(input)])?;
            let v = out
                .pop()
                .ok_or_else(|| PolicyError::Embedding("empty response".into()))?;
            if v.len() != *dim {
                return Err(PolicyError::Config(format!(
                    "embedding has dimension {}, expected {dim}",
                    v.len()
                )));
            }
            Ok(v)
        }
    }
}
