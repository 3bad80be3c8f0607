//! NashConv of play observed in three-player logs.
//!
//! Each information set of the three-player tree gets the empirical frequency of its
//! actions, with one pseudo-count per action. The resulting behavioral profile is
//! scored on the exact tree.

use onuw_core::{Event, GameLog, OutcomeRules, PlayerId, RoleCard};
use onuw_equilibrium::three_player::{
    initial_deal, vote_options, NightChoice, P1_VOTE, P2_VOTE, ROBBER_NIGHT,
};
use onuw_equilibrium::{build_tree_no_discussion, build_tree_with_discussion, BehaviorProfile, BeliefTriple, TreeGame};
use serde::{Deserialize, Serialize};

use crate::error::HarnessError;

/// Fewer logs than this mark an estimate as low confidence.
pub const MIN_LOGS: usize = 30;

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
pub enum TreeVariant {
    /// The Robber's night move is a decision in the tree.
    #[default]
    NoDiscussion,
    /// Voting after discussion; the night move is drawn from this shared belief.
    WithDiscussion(BeliefTriple),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InfosetEstimate {
    pub label: String,
    pub counts: Vec<u64>,
    /// Smoothed frequencies.
    pub probs: Vec<f64>,
}

impl InfosetEstimate {
    pub fn visits(&self) -> u64 {
        self.counts.iter().sum()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NashConvEstimate {
    pub value: f64,
    pub gains: Vec<f64>,
    pub infosets: Vec<InfosetEstimate>,
    pub logs_used: usize,
    pub logs_skipped: usize,
    /// Information sets never reached in the logs (estimated as uniform).
    pub unvisited: Vec<String>,
    pub low_confidence: bool,
}

/// The decisions of one three-player log, as tree action indices.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct ObservedPlay {
    pub night: NightChoice,
    /// Per seat, index into [`vote_options`].
    pub votes: [usize; 3],
}

/// Reads the tree decisions from a finished three-player log with the Werewolf,
/// Werewolf, Robber deal.
pub fn observed_play(log: &GameLog) -> Result<ObservedPlay, HarnessError> {
    let bad = |m: &str| Err(HarnessError::Data(m.to_string()));
    if log.spec.player_count != 3 || log.initial != initial_deal() {
        return bad("not a Werewolf, Werewolf, Robber three-player log");
    }
    if !log.valid || log.result.is_none() {
        return bad("unfinished or invalid log");
    }
    let night = log
        .events
        .iter()
        .find_map(|e| match e {
            Event::Night(r) if log.initial.role_of(r.actor) == RoleCard::Robber => {
                NightChoice::from_action(r.action)
            }
            _ => None,
        });
    let Some(night) = night else { return bad("no Robber move recorded") };
    let mut votes = [usize::MAX; 3];
    for (_, voter, target) in log.votes() {
        let seat = voter.index();
        if seat >= 3 {
            return bad("vote by a seat outside the game");
        }
        votes[seat] = match vote_options(seat).iter().position(|p: &PlayerId| *p == target) {
            Some(i) => i,
            None => return bad("vote for an impossible target"),
        };
    }
    if votes.contains(&usize::MAX) {
        return bad("missing votes");
    }
    Ok(ObservedPlay { night, votes })
}

/// Action counts per information set of `tree`.
pub fn count_play(tree: &TreeGame, plays: &[ObservedPlay]) -> Vec<Vec<u64>> {
    let mut counts: Vec<Vec<u64>> = tree.infosets.iter().map(|s| vec![0; s.actions.len()]).collect();
    let mut bump = |label: &str, a: usize| {
        if let Some(i) = tree.infoset_by_label(label) {
            counts[i][a] += 1;
        }
    };
    for p in plays {
        bump(ROBBER_NIGHT, p.night.index());
        bump(P1_VOTE, p.votes[0]);
        bump(P2_VOTE, p.votes[1]);
        bump(p.night.vote_infoset(), p.votes[2]);
    }
    counts
}

/// `(count + 1) / (total + k)` per action.
pub fn smoothed(counts: &[u64]) -> Vec<f64> {
    let total: u64 = counts.iter().sum();
    let k = counts.len() as f64;
    counts.iter().map(|&c| (c as f64 + 1.0) / (total as f64 + k)).collect()
}

pub fn build_tree(variant: TreeVariant, rules: OutcomeRules) -> Result<TreeGame, HarnessError> {
    Ok(match variant {
        TreeVariant::NoDiscussion => build_tree_no_discussion(rules),
        TreeVariant::WithDiscussion(bt) => build_tree_with_discussion(bt, rules)?,
    })
}

/// Estimates the behavioral profile from `logs` and scores it on the chosen tree.
/// Logs that are not finished Werewolf/Werewolf/Robber games are skipped.
pub fn estimate_nash_conv(
    logs: &[GameLog],
    variant: TreeVariant,
    rules: OutcomeRules,
) -> Result<NashConvEstimate, HarnessError> {
    let tree = build_tree(variant, rules)?;
    let plays: Vec<ObservedPlay> = logs.iter().filter_map(|l| observed_play(l).ok()).collect();
    let counts = count_play(&tree, &plays);
    let infosets: Vec<InfosetEstimate> = tree
        .infosets
        .iter()
        .zip(&counts)
        .map(|(s, c)| InfosetEstimate { label: s.label.clone(), counts: c.clone(), probs: smoothed(c) })
        .collect();
    let profile = BehaviorProfile(infosets.iter().map(|s| s.probs.clone()).collect());
    let gains = tree.gains(&profile);
    let unvisited: Vec<String> =
        infosets.iter().filter(|s| s.visits() == 0).map(|s| s.label.clone()).collect();
    Ok(NashConvEstimate {
        value: gains.iter().sum(),
        gains,
        logs_used: plays.len(),
        logs_skipped: logs.len() - plays.len(),
        low_confidence: plays.len() < MIN_LOGS,
        unvisited,
        infosets,
    })
}
