//! Where a player's discussion tactic comes from.

use std::sync::Arc;

use onuw_core::{BeliefReport, Tactic, ALL_TACTICS};
use onuw_policy::{encode_features, EncoderMode, FeatureInput, QFunction, SelectionMode, TextEmbedder};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::context::AgentContext;
use crate::error::AgentError;

#[derive(Clone)]
pub enum TacticSource {
    /// No tactic conditioning.
    None,
    Fixed(Tactic),
    /// Uniform over the six tactics.
    Random,
    /// A trained Q-function over encoded states.
    Policy {
        q: Arc<QFunction>,
        encoder: EncoderMode,
        mode: SelectionMode,
        embedder: Option<Arc<dyn TextEmbedder + Send + Sync>>,
    },
}

impl std::fmt::Debug for TacticSource {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TacticSource::None => f.write_str("None"),
            TacticSource::Fixed(t) => write!(f, "Fixed({t:?})"),
            TacticSource::Random => f.write_str("Random"),
            TacticSource::Policy { encoder, mode, .. } => {
                write!(f, "Policy({}, {mode:?})", encoder.name())
            }
        }
    }
}

/// Encodes the player's state for the tactic policy.
pub fn encode_state(
    ctx: &AgentContext,
    report: &BeliefReport,
    encoder: &EncoderMode,
    embedder: Option<&dyn TextEmbedder>,
) -> Result<Vec<f64>, AgentError> {
    let notes = ctx.private_notes();
    let input = FeatureInput {
        player: ctx.player,
        round: ctx.round(),
        history: &ctx.history,
        belief: report,
        own_team: report.self_estimate.team(),
        private_notes: &notes,
    };
    Ok(encode_features(&input, encoder, embedder)?)
}

impl TacticSource {
    pub fn select(
        &self,
        ctx: &AgentContext,
        report: &BeliefReport,
        rng: &mut ChaCha8Rng,
    ) -> Result<Option<Tactic>, AgentError> {
        Ok(match self {
            TacticSource::None => None,
            TacticSource::Fixed(t) => Some(*t),
            TacticSource::Random => Some(ALL_TACTICS[rng.gen_range(0..ALL_TACTICS.len())]),
            TacticSource::Policy { q, encoder, mode, embedder } => {
                let e = embedder.as_deref().map(|e| e as &dyn TextEmbedder);
                let state = encode_state(ctx, report, encoder, e)?;
                Some(onuw_policy::select_tactic(q, &state, *mode, rng)?)
            }
        })
    }
}
