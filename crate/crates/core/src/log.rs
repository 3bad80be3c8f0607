//! Serialized match records and deterministic replay.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::GameError;
use crate::game::{self, Assignment, DealMode, Event, GameSpec, GameState, Phase};
use crate::role::{PlayerId, RoleCard};
use crate::rules::Outcome;
use crate::tactic::Tactic;

pub const LOG_FORMAT: &str = "onuw-gamelog/1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GameResult {
    pub final_roles: Vec<RoleCard>,
    pub votes_received: Vec<u32>,
    pub deaths: BTreeSet<PlayerId>,
    pub outcome: Outcome,
    pub utilities: Vec<i8>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GameLog {
    pub format: String,
    /// Index-to-name table for tactic labels, e.g. `0=HonestEvidence`.
    pub tactic_mapping: Vec<String>,
    pub spec: GameSpec,
    pub deal: DealMode,
    pub initial: Assignment,
    pub events: Vec<Event>,
    #[serde(default)]
    pub result: Option<GameResult>,
    /// False for partial logs (aborted or quit games).
    #[serde(default = "yes")]
    pub valid: bool,
    #[serde(default)]
    pub flags: Vec<String>,
    #[serde(default)]
    pub meta: BTreeMap<String, String>,
}

fn yes() -> bool {
    true
}

impl GameLog {
    pub fn from_state(state: &GameState) -> GameLog {
        let result = match (&state.tally, state.outcome) {
            (Some(t), Some(outcome)) => Some(GameResult {
                final_roles: state.current.player_roles.clone(),
                votes_received: t.received.clone(),
                deaths: t.deaths.clone(),
                outcome,
                utilities: state.utilities().unwrap_or_default(),
            }),
            _ => None,
        };
        GameLog {
            format: LOG_FORMAT.to_string(),
            tactic_mapping: Tactic::mapping(),
            spec: state.spec.clone(),
            deal: state.deal,
            initial: state.initial.clone(),
            events: state.events.clone(),
            valid: result.is_some(),
            result,
            flags: Vec::new(),
            meta: BTreeMap::new(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("game logs always serialize")
    }

    pub fn parse(text: &str) -> Result<GameLog, GameError> {
        let log: GameLog =
            serde_json::from_str(text).map_err(|e| GameError::Parse(e.to_string()))?;
        if log.format != LOG_FORMAT {
            return Err(GameError::Parse(format!("unsupported log format `{}`", log.format)));
        }
        if !Tactic::mapping_matches(&log.tactic_mapping) {
            return Err(GameError::Parse(format!(
                "tactic mapping {:?} does not match {:?}",
                log.tactic_mapping,
                Tactic::mapping()
            )));
        }
        Ok(log)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<GameLog, GameError> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| GameError::Parse(format!("{}: {e}", path.as_ref().display())))?;
        GameLog::parse(&text)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> std::io::Result<()> {
        std::fs::write(path, self.to_json())
    }

    pub fn votes(&self) -> Vec<(usize, PlayerId, PlayerId)> {
        self.events
            .iter()
            .enumerate()
            .filter_map(|(i, e)| match e {
                Event::Vote(v) => Some((i, v.voter, v.target)),
                _ => None,
            })
            .collect()
    }
}

fn integrity(event: Option<usize>, detail: impl Into<String>) -> GameError {
    GameError::Integrity { event, detail: detail.into() }
}

/// Re-executes a log and checks it against the recorded result.
pub fn replay(log: &GameLog) -> Result<GameState, GameError> {
    if log.events.is_empty() {
        return Err(GameError::IncompleteLog("no events recorded".into()));
    }
    let mut state = match log.deal {
        DealMode::Seeded => {
            let s = game::new_game(log.spec.clone())?;
            if s.initial != log.initial {
                return Err(integrity(
                    None,
                    format!("seed {} deals {}, log has {}", log.spec.rng_seed, s.initial, log.initial),
                ));
            }
            s
        }
        DealMode::Fixed => game::new_game_with_deal(log.spec.clone(), log.initial.clone())?,
    };

    // Events must be grouped: night, then speeches, then votes.
    let stage = |e: &Event| match e {
        Event::Night(_) => 0,
        Event::Speech(_) => 1,
        Event::Vote(_) => 2,
    };
    for (i, w) in log.events.windows(2).enumerate() {
        if stage(&w[1]) < stage(&w[0]) {
            return Err(integrity(Some(i + 1), "event out of phase order"));
        }
    }

    let night: Vec<(usize, &crate::night::NightRecord)> = log
        .events
        .iter()
        .enumerate()
        .filter_map(|(i, e)| match e {
            Event::Night(r) => Some((i, r)),
            _ => None,
        })
        .collect();
    let actions: BTreeMap<PlayerId, _> = night.iter().map(|(_, r)| (r.actor, r.action)).collect();
    if actions.len() != night.len() {
        return Err(integrity(None, "a player acted twice at night"));
    }
    state
        .resolve_night(&actions)
        .map_err(|e| integrity(night.first().map(|(i, _)| *i), e.to_string()))?;
    let replayed: Vec<_> = state.night_records().cloned().collect();
    for (k, (i, rec)) in night.iter().enumerate() {
        if replayed.get(k) != Some(*rec) {
            return Err(integrity(Some(*i), format!("night record for {} differs", rec.actor)));
        }
    }
    if replayed.len() != night.len() {
        return Err(integrity(None, "logged night is missing actions"));
    }

    let mut votes = Vec::new();
    let mut first_vote = None;
    for (i, e) in log.events.iter().enumerate() {
        match e {
            Event::Night(_) => {}
            Event::Speech(s) => {
                state.record_speech(s.clone()).map_err(|e| integrity(Some(i), e.to_string()))?;
            }
            Event::Vote(v) => {
                if v.voter.index() != votes.len() {
                    return Err(integrity(Some(i), format!("vote by {} out of seat order", v.voter)));
                }
                first_vote.get_or_insert(i);
                votes.push(v.target);
            }
        }
    }

    if !votes.is_empty() {
        if state.phase != Phase::Voting {
            return Err(integrity(first_vote, format!("votes cast during {}", state.phase)));
        }
        if votes.len() != state.player_count() {
            return Err(GameError::IncompleteLog(format!(
                "{} of {} votes recorded",
                votes.len(),
                state.player_count()
            )));
        }
        state.cast_votes(&votes).map_err(|e| integrity(first_vote, e.to_string()))?;
    }

    if let Some(result) = &log.result {
        check_result(log, &state, result)?;
    } else if log.valid && state.phase != Phase::Finished {
        return Err(GameError::IncompleteLog(format!("log ends during {}", state.phase)));
    }
    Ok(state)
}

fn check_result(log: &GameLog, state: &GameState, result: &GameResult) -> Result<(), GameError> {
    let Some(tally) = &state.tally else {
        return Err(GameError::IncompleteLog("result recorded without votes".into()));
    };
    if tally.received != result.votes_received {
        // The first vote landing on a player whose count changed; prefer surpluses,
        // which is where an altered vote now points.
        let n = tally.received.len().min(result.votes_received.len());
        let surplus: BTreeSet<usize> =
            (0..n).filter(|&p| tally.received[p] > result.votes_received[p]).collect();
        let changed: BTreeSet<usize> =
            (0..n).filter(|&p| tally.received[p] != result.votes_received[p]).collect();
        let find = |set: &BTreeSet<usize>| {
            log.votes().into_iter().find(|(_, _, t)| set.contains(&t.index())).map(|(i, _, _)| i)
        };
        let at = find(&surplus).or_else(|| find(&changed));
        return Err(integrity(
            at,
            format!(
                "replayed vote counts {:?} differ from logged {:?}",
                tally.received, result.votes_received
            ),
        ));
    }
    if state.current.player_roles != result.final_roles {
        return Err(integrity(None, "final roles differ"));
    }
    if tally.deaths != result.deaths {
        return Err(integrity(None, "deaths differ"));
    }
    if state.outcome != Some(result.outcome) {
        return Err(integrity(
            None,
            format!("replayed outcome {:?} differs from logged {:?}", state.outcome, result.outcome),
        ));
    }
    if state.utilities().as_deref() != Some(result.utilities.as_slice()) {
        return Err(integrity(None, "utilities differ"));
    }
    Ok(())
}
