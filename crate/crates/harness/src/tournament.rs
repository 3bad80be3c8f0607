//! Win-rate matrices: Team Village lineups against Team Werewolf lineups.

use std::io::Write;
use std::path::PathBuf;

use onuw_agents::AgentConfig;
use onuw_core::{GameLog, OutcomeRules, PlayerId, Team};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, ModelSettings, Resources, DEFAULT_REPEATS};
use crate::error::HarnessError;
use crate::metrics::in_pool;
use crate::runner::run_match;
use crate::settings::{derive_seed, Setting};

/// One agent version used by every seat of a team.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Lineup {
    pub name: String,
    #[serde(default)]
    pub agent: AgentConfig,
}

impl Lineup {
    pub fn new(name: impl Into<String>, agent: AgentConfig) -> Self {
        Lineup { name: name.into(), agent }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TournamentConfig {
    pub setting: Setting,
    pub village: Vec<Lineup>,
    pub werewolf: Vec<Lineup>,
    pub repeats: u32,
    pub seed: u64,
    pub workers: Option<usize>,
    pub rules: OutcomeRules,
    pub model: ModelSettings,
    pub output_dir: Option<PathBuf>,
}

impl Default for TournamentConfig {
    fn default() -> Self {
        TournamentConfig {
            setting: Setting::FiveStandard,
            village: Vec::new(),
            werewolf: Vec::new(),
            repeats: DEFAULT_REPEATS,
            seed: 0,
            workers: None,
            rules: OutcomeRules::Standard,
            model: ModelSettings::default(),
            output_dir: None,
        }
    }
}

impl TournamentConfig {
    pub fn from_toml(text: &str) -> Result<Self, HarnessError> {
        let cfg: TournamentConfig = toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.repeats == 0 {
            return Err(HarnessError::Config("repeats must be at least 1".into()));
        }
        if self.village.is_empty() || self.werewolf.is_empty() {
            return Err(HarnessError::Config("need at least one lineup per team".into()));
        }
        if self.workers == Some(0) {
            return Err(HarnessError::Config("workers must be at least 1".into()));
        }
        Ok(())
    }

    /// Seat configs for one game: each seat takes its team's lineup, by initial role.
    pub fn match_config(&self, village: usize, werewolf: usize, seed: u64) -> Result<ExperimentConfig, HarnessError> {
        let state = self.setting.new_game(seed, self.rules)?;
        let seats = state
            .players()
            .map(|p: PlayerId| match state.initial.role_of(p).team() {
                Team::Village => self.village[village].agent.clone(),
                Team::Werewolf => self.werewolf[werewolf].agent.clone(),
            })
            .collect();
        Ok(ExperimentConfig {
            setting: self.setting,
            seats,
            repeats: 1,
            seed,
            rules: self.rules,
            model: self.model.clone(),
            ..ExperimentConfig::default()
        })
    }

    fn needs_gateway(&self) -> bool {
        self.village.iter().chain(&self.werewolf).any(|l| l.agent.kind.needs_gateway())
    }

    /// Shared resources for every match of the tournament.
    pub fn resources(&self) -> Result<Resources, HarnessError> {
        let mut probe = ExperimentConfig { model: self.model.clone(), ..ExperimentConfig::default() };
        if self.needs_gateway() {
            probe.seats = self.village.iter().chain(&self.werewolf).map(|l| l.agent.clone()).collect();
        }
        Resources::for_experiment(&probe)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CellResult {
    pub village: String,
    pub werewolf: String,
    pub games: usize,
    pub valid: usize,
    pub village_wins: usize,
}

impl CellResult {
    /// Team Village wins per valid game (0 when no game was valid).
    pub fn win_rate(&self) -> f64 {
        if self.valid == 0 {
            0.0
        } else {
            self.village_wins as f64 / self.valid as f64
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TournamentResult {
    pub village: Vec<String>,
    pub werewolf: Vec<String>,
    /// Row-major: village lineup by werewolf lineup.
    pub cells: Vec<CellResult>,
}

impl TournamentResult {
    pub fn cell(&self, village: usize, werewolf: usize) -> &CellResult {
        &self.cells[village * self.werewolf.len() + werewolf]
    }

    pub fn matrix(&self) -> Vec<Vec<f64>> {
        (0..self.village.len())
            .map(|v| (0..self.werewolf.len()).map(|w| self.cell(v, w).win_rate()).collect())
            .collect()
    }

    pub fn write_matrix_csv<W: Write>(&self, w: W) -> Result<(), HarnessError> {
        let mut out = csv::Writer::from_writer(w);
        let mut header = vec!["village \\ werewolf".to_string()];
        header.extend(self.werewolf.iter().cloned());
        out.write_record(&header)?;
        for (v, row) in self.matrix().iter().enumerate() {
            let mut rec = vec![self.village[v].clone()];
            rec.extend(row.iter().map(|x| format!("{x:.4}")));
            out.write_record(&rec)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn write_counts_csv<W: Write>(&self, w: W) -> Result<(), HarnessError> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["village", "werewolf", "games", "valid", "village_wins", "win_rate"])?;
        for c in &self.cells {
            out.write_record([
                c.village.clone(),
                c.werewolf.clone(),
                c.games.to_string(),
                c.valid.to_string(),
                c.village_wins.to_string(),
                format!("{:.4}", c.win_rate()),
            ])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Plays every cell `repeats` times. Repeat `r` of every cell uses the same seed, so
/// cells differ only in the agents. Logs come back ordered by (cell, repeat).
pub fn run_tournament(
    cfg: &TournamentConfig,
    res: &Resources,
) -> Result<(TournamentResult, Vec<GameLog>), HarnessError> {
    cfg.validate()?;
    let (nv, nw) = (cfg.village.len(), cfg.werewolf.len());
    let jobs: Vec<(usize, usize, u64)> = (0..nv * nw)
        .flat_map(|c| (0..cfg.repeats as u64).map(move |r| (c / nw, c % nw, r)))
        .collect();
    let logs: Vec<GameLog> = in_pool(cfg.workers, || {
        jobs.par_iter()
            .map(|&(v, w, r)| {
                let seed = derive_seed(cfg.seed, r);
                let mut log = run_match(&cfg.match_config(v, w, seed)?, res, seed)?;
                log.meta.insert("village_lineup".into(), cfg.village[v].name.clone());
                log.meta.insert("werewolf_lineup".into(), cfg.werewolf[w].name.clone());
                Ok(log)
            })
            .collect::<Result<Vec<_>, HarnessError>>()
    })??;
    let per = cfg.repeats as usize;
    let cells = (0..nv * nw)
        .map(|c| {
            let chunk = &logs[c * per..(c + 1) * per];
            let valid: Vec<_> = chunk.iter().filter(|l| l.valid).filter_map(|l| l.result.as_ref()).collect();
            CellResult {
                village: cfg.village[c / nw].name.clone(),
                werewolf: cfg.werewolf[c % nw].name.clone(),
                games: chunk.len(),
                valid: valid.len(),
                village_wins: valid.iter().filter(|r| r.outcome.winner() == Some(Team::Village)).count(),
            }
        })
        .collect();
    let result = TournamentResult {
        village: cfg.village.iter().map(|l| l.name.clone()).collect(),
        werewolf: cfg.werewolf.iter().map(|l| l.name.clone()).collect(),
        cells,
    };
    Ok((result, logs))
}
