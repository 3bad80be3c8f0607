//! Offline-RL transitions from game logs, one trajectory per player per log.

use onuw_agents::{encode_state, public_speech, AgentContext};
use onuw_core::{BeliefReport, Event, GameLog, Phase, PlayerId, Speech};
use onuw_policy::{EncoderMode, RewardMode, TextEmbedder, Transition, TransitionsFile, TransitionsHeader};

use crate::error::HarnessError;

/// One player's Day-phase decisions in one log.
#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryRecord {
    pub log_index: usize,
    pub player: PlayerId,
    pub steps: Vec<Transition>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Extraction {
    pub header: TransitionsHeader,
    pub trajectories: Vec<TrajectoryRecord>,
    /// Speeches seen in all logs.
    pub speeches: usize,
    /// Speeches that produced no row (no tactic label, or the log is unfinished).
    pub skipped: usize,
    pub notes: Vec<String>,
}

impl Extraction {
    pub fn row_count(&self) -> usize {
        self.trajectories.iter().map(|t| t.steps.len()).sum()
    }

    pub fn rows(&self) -> Vec<Transition> {
        self.trajectories.iter().flat_map(|t| t.steps.iter().cloned()).collect()
    }

    pub fn to_file(&self) -> TransitionsFile {
        TransitionsFile { header: self.header.clone(), rows: self.rows() }
    }
}

fn context(log: &GameLog, player: PlayerId, history: Vec<Speech>, phase: Phase) -> AgentContext {
    let mut spec = log.spec.clone();
    spec.rng_seed = 0;
    let night = log.events.iter().find_map(|e| match e {
        Event::Night(r) if r.actor == player => Some(r.clone()),
        _ => None,
    });
    AgentContext {
        player,
        spec,
        initial_role: log.initial.role_of(player),
        night,
        history,
        phase,
        rng_seed: 0,
    }
}

/// Encodes every labeled speech as `(state, tactic, reward, next state, terminal)`.
/// The state of a speech is what the speaker saw just before speaking (public history
/// and the belief logged with the speech, or a uniform belief when none was logged);
/// the last step's next state is the post-discussion view.
pub fn extract_transitions(
    logs: &[GameLog],
    reward: RewardMode,
    encoder: &EncoderMode,
    embedder: Option<&dyn TextEmbedder>,
) -> Result<Extraction, HarnessError> {
    let mut out = Extraction {
        header: TransitionsHeader::new(encoder.dim(), reward, encoder.clone()),
        trajectories: Vec::new(),
        speeches: 0,
        skipped: 0,
        notes: Vec::new(),
    };
    for (li, log) in logs.iter().enumerate() {
        let speeches: Vec<&Speech> = log
            .events
            .iter()
            .filter_map(|e| match e {
                Event::Speech(s) => Some(s),
                _ => None,
            })
            .collect();
        out.speeches += speeches.len();
        let n = log.spec.player_count;
        let result = match (&log.result, log.valid) {
            (Some(r), true) if log.initial.player_roles.len() == n && r.utilities.len() == n => r,
            _ => {
                out.skipped += speeches.len();
                out.notes.push(format!("log {li}: unfinished or invalid, skipped"));
                continue;
            }
        };
        for player in PlayerId::all(n) {
            let mut states = Vec::new();
            let mut tactics = Vec::new();
            let mut last_report = None;
            for (k, s) in speeches.iter().enumerate().filter(|(_, s)| s.player == player) {
                let Some(t) = s.tactic else {
                    out.skipped += 1;
                    continue;
                };
                let history = speeches[..k].iter().map(|s| public_speech(s)).collect();
                let ctx = context(log, player, history, Phase::Day(s.round));
                let report = s
                    .belief
                    .clone()
                    .unwrap_or_else(|| BeliefReport::uniform(n, ctx.initial_role));
                states.push(encode_state(&ctx, &report, encoder, embedder)?);
                tactics.push(t.index());
                last_report = Some(report);
            }
            let Some(report) = last_report else { continue };
            let history = speeches.iter().map(|s| public_speech(s)).collect();
            let end = context(log, player, history, Phase::Voting);
            states.push(encode_state(&end, &report, encoder, embedder)?);

            let utility = result.utilities[player.index()] as f64;
            let rewards = reward.rewards(tactics.len(), utility);
            let steps = (0..tactics.len())
                .map(|i| Transition {
                    state: states[i].clone(),
                    tactic: tactics[i],
                    reward: rewards[i],
                    next_state: states[i + 1].clone(),
                    terminal: i + 1 == tactics.len(),
                })
                .collect();
            out.trajectories.push(TrajectoryRecord { log_index: li, player, steps });
        }
    }
    if out.skipped > 0 {
        out.notes.push(format!("{} speeches without a row", out.skipped));
    }
    Ok(out)
}
