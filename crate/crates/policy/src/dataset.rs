//! Offline transitions and their JSON Lines file format.

use std::io::{BufRead, Write};

use onuw_core::Tactic;
use serde::{Deserialize, Serialize};

use crate::error::PolicyError;
use crate::features::EncoderMode;

pub const TRANSITIONS_FORMAT: &str = "onuw-transitions/1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Transition {
    pub state: Vec<f64>,
    pub tactic: usize,
    pub reward: f64,
    pub next_state: Vec<f64>,
    pub terminal: bool,
}

/// How game results become rewards.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum RewardMode {
    /// Every speech of a player gets that player's final utility.
    #[default]
    PerStep,
    /// Only the player's last speech is rewarded.
    TerminalOnly,
}

impl RewardMode {
    /// Rewards for `steps` consecutive decisions of a player whose game utility is `utility`.
    pub fn rewards(self, steps: usize, utility: f64) -> Vec<f64> {
        match self {
            RewardMode::PerStep => vec![utility; steps],
            RewardMode::TerminalOnly => (0..steps)
                .map(|i| if i + 1 == steps { utility } else { 0.0 })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransitionsHeader {
    pub format: String,
    pub state_dim: usize,
    pub tactic_mapping: Vec<String>,
    pub reward_mode: RewardMode,
    pub encoder_mode: EncoderMode,
}

impl TransitionsHeader {
    pub fn new(state_dim: usize, reward_mode: RewardMode, encoder_mode: EncoderMode) -> Self {
        TransitionsHeader {
            format: TRANSITIONS_FORMAT.into(),
            state_dim,
            tactic_mapping: Tactic::mapping(),
            reward_mode,
            encoder_mode,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TransitionsFile {
    pub header: TransitionsHeader,
    pub rows: Vec<Transition>,
}

impl TransitionsFile {
    pub fn write<W: Write>(&self, mut w: W) -> Result<(), PolicyError> {
        writeln!(
            w,
            "{}",
            serde_json::to_string(&self.header).expect("serializable")
        )?;
        for r in &self.rows {
            writeln!(w, "{}", serde_json::to_string(r).expect("serializable"))?;
        }
        Ok(())
    }

    pub fn read<R: BufRead>(r: R) -> Result<Self, PolicyError> {
        let mut lines = r.lines();
        let first = lines
            .next()
            .ok_or_else(|| PolicyError::Format("missing header".into()))??;
        let header: TransitionsHeader = serde_json::from_str(&first)
            .map_err(|e| PolicyError::Format(format!("header: {e}")))?;
        if header.format != TRANSITIONS_FORMAT {
            return Err(PolicyError::Format(format!(
                "unsupported format `{}`",
                header.format
            )));
        }
        if !Tactic::mapping_matches(&header.tactic_mapping) {
            return Err(PolicyError::Format("tactic mapping differs".into()));
        }
        let mut rows = Vec::new();
        for (i, line) in lines.enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let t: Transition = serde_json::from_str(&line)
                .map_err(|e| PolicyError::Format(format!("row {}: {e}", i + 1)))?;
            if t.state.len() != header.state_dim || t.next_state.len() != header.state_dim {
                return Err(PolicyError::Format(format!(
                    "row {} has the wrong dimension",
                    i + 1
                )));
            }
            if Tactic::from_index(t.tactic).is_none() {
                return Err(PolicyError::Format(format!(
                    "row {} has tactic {}",
                    i + 1,
                    t.tactic
                )));
            }
            rows.push(t);
        }
        Ok(TransitionsFile { header, rows })
    }

    pub fn parse(text: &str) -> Result<Self, PolicyError> {
        Self::read(text.as_bytes())
    }
}
