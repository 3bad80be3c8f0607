//! Experiment driver for One Night Ultimate Werewolf agents: matches, tournaments,
//! offline-RL data extraction, log statistics and equilibrium reports.

pub mod config;
pub mod error;
pub mod interactive;
pub mod metrics;
pub mod nashconv;
pub mod profile_agent;
pub mod runner;
pub mod settings;
pub mod stats;
pub mod tournament;
pub mod transitions;
pub mod verify;

pub use config::{ExperimentConfig, GatewayMode, ModelSettings, Resources, DEFAULT_REPEATS};
pub use error::HarnessError;
pub use interactive::{interactive_seat, HumanAgent};
pub use metrics::{average_votes, focal_experiment, run_experiment, summarize, FocalMetrics, Metrics, FOCAL_SEAT};
pub use nashconv::{estimate_nash_conv, observed_play, smoothed, NashConvEstimate, ObservedPlay, TreeVariant, MIN_LOGS};
pub use profile_agent::ProfileAgent;
pub use runner::{build_agents, play_game, run_match};
pub use settings::{derive_seed, Setting, ALL_SETTINGS};
pub use stats::{tactic_statistics, TacticRow, TacticStatsTable};
pub use tournament::{run_tournament, CellResult, Lineup, TournamentConfig, TournamentResult};
pub use transitions::{extract_transitions, Extraction, TrajectoryRecord};
pub use verify::{verify_equilibria, CheckLine, VerificationReport};
