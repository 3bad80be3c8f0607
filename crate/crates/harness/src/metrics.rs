//! Win rates and vote counts over a set of logs.

use onuw_agents::AgentConfig;
use onuw_core::{GameLog, PlayerId, Team};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{ExperimentConfig, Resources};
use crate::error::HarnessError;
use crate::runner::run_match;
use crate::settings::{derive_seed, Setting};

/// Seat of the evaluated player in focal-player experiments (Player 3).
pub const FOCAL_SEAT: PlayerId = PlayerId(2);

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FocalMetrics {
    pub seat: PlayerId,
    /// Share of valid games the focal player won (utility +1).
    pub win_rate: f64,
    /// Votes received per valid game.
    pub average_votes: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Metrics {
    pub games: usize,
    pub valid_games: usize,
    pub village_wins: usize,
    pub werewolf_wins: usize,
    pub village_win_rate: f64,
    pub werewolf_win_rate: f64,
    pub focal: Option<FocalMetrics>,
    /// Filled in for three-player experiments.
    pub nash_conv: Option<f64>,
}

fn rate(k: usize, n: usize) -> f64 {
    if n == 0 {
        0.0
    } else {
        k as f64 / n as f64
    }
}

/// Votes `player` received per valid log.
pub fn average_votes(logs: &[GameLog], player: PlayerId) -> f64 {
    let got: Vec<u32> = logs
        .iter()
        .filter(|l| l.valid)
        .filter_map(|l| l.result.as_ref()?.votes_received.get(player.index()).copied())
        .collect();
    if got.is_empty() {
        0.0
    } else {
        got.iter().map(|&v| v as f64).sum::<f64>() / got.len() as f64
    }
}

pub fn summarize(logs: &[GameLog], focal: Option<PlayerId>) -> Metrics {
    let valid: Vec<_> = logs.iter().filter(|l| l.valid).filter_map(|l| l.result.as_ref()).collect();
    let wins = |t: Team| valid.iter().filter(|r| r.outcome.winner() == Some(t)).count();
    let (vw, ww) = (wins(Team::Village), wins(Team::Werewolf));
    let focal = focal.map(|seat| {
        let won = valid.iter().filter(|r| r.utilities.get(seat.index()) == Some(&1)).count();
        FocalMetrics { seat, win_rate: rate(won, valid.len()), average_votes: average_votes(logs, seat) }
    });
    Metrics {
        games: logs.len(),
        valid_games: valid.len(),
        village_wins: vw,
        werewolf_wins: ww,
        village_win_rate: rate(vw, valid.len()),
        werewolf_win_rate: rate(ww, valid.len()),
        focal,
        nash_conv: None,
    }
}

/// Runs `f` on a pool of `workers` threads (all cores when `None`).
pub(crate) fn in_pool<T: Send>(
    workers: Option<usize>,
    f: impl FnOnce() -> T + Send,
) -> Result<T, HarnessError> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(w) = workers {
        b = b.num_threads(w);
    }
    let pool = b.build().map_err(|e| HarnessError::Config(e.to_string()))?;
    Ok(pool.install(f))
}

/// Plays `cfg.repeats` matches, repeat `r` seeded with `derive_seed(cfg.seed, r)`.
/// Results come back in repeat order whatever the worker count.
pub fn run_experiment(cfg: &ExperimentConfig, res: &Resources) -> Result<Vec<GameLog>, HarnessError> {
    cfg.validate()?;
    let seeds: Vec<u64> = (0..cfg.repeats as u64).map(|r| derive_seed(cfg.seed, r)).collect();
    in_pool(cfg.workers, || seeds.par_iter().map(|&s| run_match(cfg, res, s)).collect())?
}

/// Five-player games with the evaluated agent at [`FOCAL_SEAT`] and `others` everywhere else.
pub fn focal_experiment(focal: AgentConfig, others: AgentConfig, repeats: u32, seed: u64) -> ExperimentConfig {
    let mut seats = vec![others; 5];
    seats[FOCAL_SEAT.index()] = focal;
    ExperimentConfig { setting: Setting::FiveStandard, seats, repeats, seed, ..ExperimentConfig::default() }
}
