//! Rules engine for One Night Ultimate Werewolf (3–5 players), exact Bayesian
//! beliefs over role assignments, and a replayable match log.

pub mod belief;
pub mod claim;
pub mod error;
pub mod game;
pub mod log;
pub mod night;
pub mod presets;
pub mod role;
pub mod rules;
pub mod tactic;

pub use belief::{
    argmax_role, chain_equals_batch, uniform_prior, Belief, BeliefReport, ClaimConsistency,
    LikelihoodModel, RoleView,
};
pub use claim::{Claim, ClaimTime};
pub use error::{BeliefError, GameError};
pub use game::{
    new_game, new_game_with_deal, Assignment, DealMode, Event, GameSpec, GameState, Phase, Speech,
    VoteRecord, DEFAULT_NIGHT_ORDER,
};
pub use log::{replay, GameLog, GameResult};
pub use night::{NightActionKind, NightRecord, Observation};
pub use role::{PlayerId, RoleCard, Team, ALL_ROLES};
pub use rules::{determine_outcome, determine_outcome_with, tally_votes, utility, Outcome, OutcomeRules, VoteTally};
pub use tactic::{Tactic, TacticCategory, ALL_TACTICS, TACTIC_COUNT};
